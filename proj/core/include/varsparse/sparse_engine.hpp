#pragma once

#include "varsparse/tail_maximal.hpp"

namespace varsparse {

/// Result of the Calderon-Zygmund stopping time on an indicator.
struct CZResult {
    std::vector<DyadicGammaCube> selected;  // maximal cubes with density > height
    std::int64_t e_cells = 0;
    std::int64_t covered_cells = 0;   // |E intersect union P_i| in cells
    std::int64_t selected_cells = 0;  // sum |P_i| in cells
    double residual_measure = 0.0;    // |E \ union P_i|
};

/// Top-down stopping time over the root's subtree: starting from the root's
/// children, a cube is selected the first time its chi_E density exceeds
/// `height`; descent bottoms out at single cells, so every E-cell ends up
/// covered. The indicator is given per cell of `cg`.
CZResult cz_decompose(const CellGrid& cg, const std::vector<std::uint8_t>& e_cells, double height);

struct ExceptionalSet {
    std::vector<std::uint8_t> cells;  // indicator over root cells
    double threshold_constant = 1.0;  // chosen C from the geometric ladder
    double reference_average = 0.0;   // <f>_{kappa^2 Q0, p}
    std::int64_t cell_count = 0;
    std::int64_t f_part_cells = 0;    // cells entering via f > C <f>
    std::int64_t m_part_cells = 0;    // cells entering via M_{T,Q0} f > C <f>
};

struct SparseEngineConfig {
    double p = 2.0;
    double kappa = 3.0;
    double height = 0.0;  // 0 selects the default 1 / 2^{d+1}
    int max_depth = 4;
    int ladder_max = 48;
    TailMaximalConfig tail;
    QuadratureConfig quad;
};

/// Smallest C = 2^m such that E = {f > C<f>} u {M_{T,Q0} f > C<f>} has
/// measure at most |Q0| / 2^{d+2}; throws ConstructionError with the measure
/// trace if the ladder is exhausted.
ExceptionalSet exceptional_set(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                               const VariationParams& params, const SparseEngineConfig& cfg);

struct SparseNode {
    DyadicGammaCube cube;
    int level = 0;    // recursion level; 0 is the root
    int parent = -1;  // node index
    std::int64_t cube_cells = 0;
    std::int64_t witness_cells = 0;      // |Q| - sum of selected children
    double threshold_constant = 0.0;     // C chosen when this node was split
    std::int64_t selected_child_cells = 0;
    // populated by finalize_family:
    GammaCube enlarged{};
    std::int64_t enlarged_cells = 0;     // |Q~| in witness-lattice cells
    std::int64_t reselected_cells = 0;   // certified witness measure
};

struct SparseFamily {
    explicit SparseFamily(CellGrid cg) : lattice(std::move(cg)) {}

    CellGrid lattice;
    std::vector<SparseNode> nodes;
    bool finalized = false;
    bool depth_exhausted = false;
    bool reselection_ok = false;
    double height = 0.0;
    double eta_construction = 0.5;  // guaranteed by the per-level halving
    double eta_inherited = 0.0;     // witness shrink by |Q|/|Q~| after enlargement
    double eta_certified = 0.0;     // after witness re-selection
    // witness lattice (valid when finalized): root-cell-sized cells tiling
    // the enlarged root cube; root cell r maps to witness coord r + woffset
    IVec wdims{};
    IVec woffset{};
    std::vector<std::int32_t> witness_paint;  // node index per witness cell, -1 free

    /// Geometry to integrate over for node i (dyadic box before finalize,
    /// enlarged gamma-cube after).
    Box node_box(std::size_t i) const;

    /// (level, k, m...) list; equal fingerprints mean identical families.
    std::vector<std::string> fingerprint() const;
};

/// Lemma-5 iteration: exceptional set, stopping time, recursion into each
/// selected cube until max_depth or no selection.
SparseFamily build_sparse_family(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                                 const VariationParams& params, const SparseEngineConfig& cfg);

/// Replace every dyadic cube by its concentric enlarged gamma-cube and
/// certify sparsity of the result: witnesses are re-selected greedily
/// (deepest cubes first) on a cell lattice covering the enlarged root, with
/// per-cube target eta = 1 / (2 * 4^{d-1}); the inherited witness ratio
/// (shrink by |Q|/|Q~|) is recorded alongside.
SparseFamily finalize_family(SparseFamily family);

struct SparsityCheck {
    bool ok = false;
    bool disjoint = false;
    double worst_ratio = 0.0;
    int worst_node = -1;
    std::int64_t checked = 0;
};

/// Checks pairwise disjointness of the witnesses and |E_Q| >= eta |Q| at
/// lattice resolution; witnesses are recomputed from the node list, so
/// ill-formed families (duplicate cubes) fail honestly.
SparsityCheck verify_sparsity(const SparseFamily& family, double eta);

/// Per-node averages <f chi_{kappa^2 Q0}>_{kappa^2 Q, p}.
std::vector<double> sparse_node_averages(const SparseFamily& family, const LatticeFunction& f, double p,
                                         double kappa);

/// Sparse operator: sum over family cubes containing x of the node average.
double sparse_operator(const SparseFamily& family, const LatticeFunction& f, const Vec& x, double p,
                       double kappa);
double sparse_operator_with(const SparseFamily& family, std::span<const double> node_averages, const Vec& x);

struct DominationReport {
    double p = 2.0;
    double r = 3.0;
    std::int64_t points = 0;
    double max_lhs = 0.0;
    // three measured forms of the sparse bound
    double fitted_dyadic_p = 0.0;   // dyadic family, exponent-p averages
    double fitted_final_p1 = 0.0;   // enlarged family, plain averages
    double fitted_final_p = 0.0;    // enlarged family, exponent-p averages
    std::int64_t flags_dyadic_p = 0;
    std::int64_t flags_final_p1 = 0;
    std::int64_t flags_final_p = 0;
    double lhs_tolerance = 1e-8;
    std::vector<std::string> family_fingerprint;
    bool reselection_ok = false;
    double eta_inherited = 0.0;
    double eta_certified = 0.0;
    // pointwise data for CSV emission (x, lhs, rhs on the finalized family)
    std::vector<Vec> points_x;
    std::vector<double> lhs;
    std::vector<double> rhs_final_p1;
    bool keep_pointwise = false;
};

/// Builds the family for f, evaluates T(f chi_{kQ0}) and the sparse bound at
/// every root cell, and reports fitted constants plus coverage flags.
DominationReport verify_domination(const CellGrid& cg, const LatticeFunction& f, const TruncationSet& I,
                                   const VariationParams& params, const SparseEngineConfig& cfg,
                                   bool keep_pointwise = false);

}  // namespace varsparse
