#pragma once

#include "varsparse/config.hpp"
#include "varsparse/report.hpp"
#include "varsparse/spectral.hpp"

namespace varsparse {

SuiteReport run_grid_suite(const RunConfig& cfg);
SuiteReport run_variation_suite(const RunConfig& cfg);
SuiteReport run_tail_maximal_suite(const RunConfig& cfg);
SuiteReport run_sparse_suite(const RunConfig& cfg);
SuiteReport run_domination_suite(const RunConfig& cfg);
SuiteReport run_spectral_suite(const RunConfig& cfg);

/// Empirical Rayleigh-quotient proxy for ||T||_{L^p -> L^p}: max over the
/// corpus of ||T g||_p at the root lattice over ||g||_p. Reported only.
double estimate_variation_norm(const RunConfig& cfg, const std::vector<CorpusEntry>& corpus);

/// Runs the configured suites in dependency order, writing one JSON report
/// and the CSV data files per suite into out_dir. Returns the process exit
/// code: 0 all asserted checks pass, 1 an asserted check failed, 2 config
/// error (including an empty suite list). Progress and timings go to `log`
/// when given; they are kept out of the JSON so reports stay byte-stable.
int run_all(const RunConfig& cfg, const std::string& out_dir, std::ostream* log = nullptr);

}  // namespace varsparse
