#pragma once

#include "varsparse/cell_grid.hpp"
#include "varsparse/curve_ops.hpp"

#include <limits>

namespace varsparse {

struct TailMaximalConfig {
    double kappa = 3.0;
    // admissible generations for the cubes Q (x in Q, Q inside the root);
    // defaults select the full root subtree
    int gen_lo = std::numeric_limits<int>::min();
    int gen_hi = std::numeric_limits<int>::max();
    // esssup sample budget per cube (strided cell centers; cubes with fewer
    // cells are sampled exhaustively)
    int esssup_samples = 8;
};

/// Per-cube values v(Q) = max_{xi in Q} T(f chi_{kQ0 \ kQ})(xi) over the
/// whole subtree of the root, with M_{T,Q0} f(x) = max over the tower of
/// cubes containing x. Built once per (f, Q0) and shared by the stopping
/// time and the Lemma-4 style checks.
class TailMaximalTable {
public:
    TailMaximalTable(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                     const VariationParams& params, const TailMaximalConfig& cfg,
                     const QuadratureConfig& quad = {});

    double at_cell(std::size_t flat_cell) const { return cell_max_[flat_cell]; }
    double at_point(const Vec& x) const;
    const std::vector<double>& cell_values() const { return cell_max_; }

    /// v(Q) for a cube of the subtree (tests and reports).
    double cube_value(const DyadicGammaCube& q) const;

    const CellGrid& cells() const { return cg_; }

private:
    const CellGrid& cg_;
    TailMaximalConfig cfg_;
    // per generation (index 0 = cell generation), flat per-cube values
    std::vector<std::vector<double>> level_values_;
    std::vector<double> cell_max_;
};

/// M_{T,Q0} f(x): tower-only evaluation at a single point.
double tail_maximal(const CellGrid& cg, const LatticeFunction& f, const Vec& x, const TruncationSet& I,
                    const VariationParams& params, const TailMaximalConfig& cfg,
                    const QuadratureConfig& quad = {});

/// Same cube tower without the Q-inside-root restriction (window cubes
/// containing x, masked against kappa*Q0 exactly as the localized variant);
/// dominates tail_maximal pointwise.
double tail_maximal_unrestricted(const CellGrid& cg, const LatticeFunction& f, const Vec& x,
                                 const TruncationSet& I, const VariationParams& params,
                                 const TailMaximalConfig& cfg, const QuadratureConfig& quad = {});

struct Lemma4Report {
    double fitted_constant = 0.0;   // smallest c with LHS <= c * RHS pointwise
    double t_norm_estimate = 0.0;   // empirical ||T||_p proxy used on the RHS
    double p = 0.0;                 // exponent the proxy was estimated at
    std::int64_t flagged_points = 0;  // RHS vanished while LHS did not
    std::vector<Vec> flagged_examples;  // first few flagged lattice points
    double max_flagged_lhs = 0.0;
    std::int64_t points = 0;
};

/// Pointwise audit of |T(f chi_{kQ0})(x)| <= c (||T|| f(x) + M_{T,Q0}f(x))
/// over the root's lattice; the constant is fitted and reported, never
/// asserted against a paper value.
Lemma4Report lemma4_check(const CellGrid& cg, const LatticeFunction& f, double p, const TruncationSet& I,
                          const VariationParams& params, const TailMaximalConfig& cfg,
                          double t_norm_estimate, const QuadratureConfig& quad = {});

}  // namespace varsparse
