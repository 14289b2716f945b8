#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "varsparse/sparse_engine.hpp"

namespace varsparse {

/// One verification check. "asserted" checks gate the exit code; "reported"
/// checks record fitted constants the source inequalities leave unspecified.
struct CheckResult {
    std::string name;
    std::string kind;  // "asserted" | "reported"
    bool pass = true;
    nlohmann::ordered_json details;
};

/// CSV payload produced alongside a suite; written as <file> by run_all.
struct CsvData {
    std::string file;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<CheckResult> checks;
    std::vector<CsvData> csv;  // not part of the JSON report

    CheckResult& add(std::string name, std::string kind);
    bool pass() const;
    nlohmann::ordered_json to_json() const;
};

/// Plot-ready CSV; fixed column set per check, documented in the README.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

std::string fnv1a_hex(const std::string& data);

/// {grid_id, k, m, shift} record for one dyadic gamma-cube.
nlohmann::ordered_json cube_record(const DyadicGammaCube& q, int dim);

/// Family dump: one {cube, witness_measure} entry per node, plus the
/// measured sparsity constants.
nlohmann::ordered_json family_record(const SparseFamily& fam);

}  // namespace varsparse
