#pragma once

#include "varsparse/cell_grid.hpp"
#include "varsparse/curve_ops.hpp"
#include "varsparse/sparse_engine.hpp"

#include "json.hpp"

namespace varsparse {

/// Batch-run configuration; see README for the schema. Loaded from JSON,
/// with every field optional except the dimension.
struct RunConfig {
    int dimension = 2;
    std::int64_t resolution = 16;  // axis-1 cells over Q0, power of two
    int k_min = -10;
    int k_max = 8;
    ShiftConvention convention = ShiftConvention::AlternatingThird;
    int q0_k = 0;
    IVec q0_m{};
    Shift q0_shift{};
    double r = 3.0;
    double p = 2.0;
    int trunc_l_min = std::numeric_limits<int>::min();  // min() selects default
    int trunc_l_max = std::numeric_limits<int>::max();
    int corpus_count = 10;
    std::vector<std::string> corpus_kinds{"upper-set-indicator", "sigmoid-product", "linear-ramp",
                                          "random-monotone", "upper-set-staircase"};
    int nonmonotone_controls = 2;
    std::uint64_t seed = 20240501;
    std::vector<std::string> suites{"grid", "variation", "tail-maximal", "sparse", "domination", "spectral"};
    std::string out_dir = "out";
    int max_depth = 4;
    int esssup_samples = 8;
    int cells_per_octave = 32;
    double lhs_tolerance = 1e-8;

    static RunConfig from_json(const nlohmann::ordered_json& j);
    static RunConfig from_file(const std::string& path);
    nlohmann::ordered_json to_json() const;
    std::string hash() const;
    void validate() const;

    int depth() const;  // log2(resolution)
    GridConfig grid_config() const;
    GammaGrid make_grid() const;
    DyadicGammaCube q0_cube() const;
    CellGrid make_cell_grid() const;
    Box corpus_box() const;   // kappa^2 Q0 (kappa = 3 for these grids)
    IVec corpus_cells() const;
    TruncationSet make_truncation() const;
    VariationParams make_params() const;
    QuadratureConfig make_quadrature() const;
    SparseEngineConfig make_engine_config() const;
};

struct CorpusEntry {
    std::string name;
    LatticeFunction f;
    bool monotone = true;
};

/// Deterministic corpus from the config: named kinds cycled over the
/// requested count, plus labeled non-monotone controls.
std::vector<CorpusEntry> build_corpus(const RunConfig& cfg);

}  // namespace varsparse
