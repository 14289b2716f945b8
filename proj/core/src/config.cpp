#include "varsparse/config.hpp"
#include "varsparse/report.hpp"

#include <cmath>
#include <fstream>

namespace varsparse {

namespace {

ShiftConvention convention_from(const std::string& s) {
    if (s == "alternating-third") return ShiftConvention::AlternatingThird;
    if (s == "paper-literal") return ShiftConvention::PaperLiteral;
    throw std::invalid_argument("config: unknown shift_convention '" + s + "'");
}

std::string convention_name(ShiftConvention c) {
    return c == ShiftConvention::AlternatingThird ? "alternating-third" : "paper-literal";
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::ordered_json& j) {
    RunConfig c;
    c.dimension = j.value("dimension", 2);
    c.resolution = j.value("resolution", std::int64_t{16});
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.k_min = g.value("k_min", c.k_min);
        c.k_max = g.value("k_max", c.k_max);
        if (g.contains("shift_convention")) c.convention = convention_from(g.at("shift_convention"));
    }
    if (j.contains("q0")) {
        const auto& q = j.at("q0");
        c.q0_k = q.value("k", 0);
        if (q.contains("m")) {
            auto m = q.at("m").get<std::vector<std::int64_t>>();
            for (std::size_t i = 0; i < m.size() && i < kMaxDim; ++i) c.q0_m[i] = m[i];
        }
        if (q.contains("shift")) {
            auto s = q.at("shift").get<std::vector<int>>();
            for (std::size_t i = 0; i < s.size() && i < kMaxDim; ++i)
                c.q0_shift[i] = static_cast<std::uint8_t>(s[i]);
        }
    }
    c.r = j.value("r", 3.0);
    c.p = j.value("p", 2.0);
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        if (t.value("kind", std::string("dyadic")) != "dyadic")
            throw std::invalid_argument("config: only dyadic truncation sets are configurable");
        c.trunc_l_min = t.value("l_min", c.trunc_l_min);
        c.trunc_l_max = t.value("l_max", c.trunc_l_max);
    }
    if (j.contains("corpus")) {
        const auto& k = j.at("corpus");
        c.corpus_count = k.value("count", c.corpus_count);
        if (k.contains("kinds")) c.corpus_kinds = k.at("kinds").get<std::vector<std::string>>();
        c.nonmonotone_controls = k.value("nonmonotone_controls", c.nonmonotone_controls);
        c.seed = k.value("seed", c.seed);
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    c.out_dir = j.value("out_dir", c.out_dir);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.esssup_samples = j.value("esssup_samples", c.esssup_samples);
    c.cells_per_octave = j.value("cells_per_octave", c.cells_per_octave);
    c.lhs_tolerance = j.value("lhs_tolerance", c.lhs_tolerance);
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::ordered_json j;
    in >> j;
    return from_json(j);
}

nlohmann::ordered_json RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["dimension"] = dimension;
    j["resolution"] = resolution;
    j["grid"] = {{"k_min", k_min}, {"k_max", k_max}, {"shift_convention", convention_name(convention)}};
    std::vector<std::int64_t> m(q0_m.begin(), q0_m.begin() + dimension);
    std::vector<int> s(dimension);
    for (int i = 0; i < dimension; ++i) s[static_cast<std::size_t>(i)] = q0_shift[i];
    j["q0"] = {{"k", q0_k}, {"m", m}, {"shift", s}};
    j["r"] = r;
    j["p"] = p;
    TruncationSet ts = make_truncation();
    j["truncation"] = {{"kind", "dyadic"},
                       {"l_min", static_cast<int>(std::llround(std::log2(ts.radii.front())))},
                       {"l_max", static_cast<int>(std::llround(std::log2(ts.radii.back())))}};
    j["corpus"] = {{"count", corpus_count},
                   {"kinds", corpus_kinds},
                   {"nonmonotone_controls", nonmonotone_controls},
                   {"seed", seed}};
    j["suites"] = suites;
    j["out_dir"] = out_dir;
    j["max_depth"] = max_depth;
    j["esssup_samples"] = esssup_samples;
    j["cells_per_octave"] = cells_per_octave;
    j["lhs_tolerance"] = lhs_tolerance;
    return j;
}

std::string RunConfig::hash() const { return fnv1a_hex(to_json().dump()); }

void RunConfig::validate() const {
    if (dimension < 2 || dimension > kMaxDim) throw std::invalid_argument("config: dimension must be in [2,6]");
    if (resolution < 1 || (resolution & (resolution - 1)) != 0)
        throw std::invalid_argument("config: resolution must be a power of two");
    if (!(r > 2.0)) throw std::invalid_argument("config: r must exceed 2 for the Theorem-1 suites");
    if (!(p >= 1.0)) throw std::invalid_argument("config: p must be >= 1");
    if (k_min >= k_max) throw std::invalid_argument("config: grid window must be nontrivial");
    if (q0_k - depth() < k_min || q0_k + 2 > k_max)
        throw std::invalid_argument("config: grid window must cover the Q0 subtree and enlargements");
    if (corpus_count < 0 || nonmonotone_controls < 0) throw std::invalid_argument("config: negative corpus count");
    if (max_depth < 0) throw std::invalid_argument("config: max_depth must be >= 0");
    if (convention == ShiftConvention::PaperLiteral) {
        // the localized machinery needs a nested subtree under Q0
        for (int i = 0; i < dimension; ++i)
            if (q0_shift[i] != 0)
                throw std::invalid_argument(
                    "config: paper-literal grids are not nested; Q0 must use the zero shift");
    }
}

int RunConfig::depth() const {
    int g = 0;
    while ((std::int64_t{1} << g) < resolution) ++g;
    return g;
}

GridConfig RunConfig::grid_config() const {
    GridConfig gc;
    gc.curve = MonomialCurve::standard(dimension);
    gc.k_min = k_min;
    gc.k_max = k_max;
    gc.convention = convention;
    return gc;
}

GammaGrid RunConfig::make_grid() const { return GammaGrid(grid_config()); }

DyadicGammaCube RunConfig::q0_cube() const {
    DyadicGammaCube q;
    q.k = q0_k;
    q.m = q0_m;
    q.shift = q0_shift;
    q.grid_id = encode_shift(q0_shift, dimension);
    return q;
}

CellGrid RunConfig::make_cell_grid() const { return CellGrid(make_grid(), q0_cube(), depth()); }

Box RunConfig::corpus_box() const {
    CellGrid cg = make_cell_grid();
    return dilate_cube(cg.root_box(), 9.0);
}

IVec RunConfig::corpus_cells() const {
    CellGrid cg = make_cell_grid();
    IVec n{};
    for (int i = 0; i < dimension; ++i) n[i] = 9 * cg.dims()[i];
    return n;
}

TruncationSet RunConfig::make_truncation() const {
    int lo = (trunc_l_min == std::numeric_limits<int>::min()) ? q0_k - depth() - 1 : trunc_l_min;
    int hi = (trunc_l_max == std::numeric_limits<int>::max()) ? q0_k + 2 : trunc_l_max;
    return TruncationSet::dyadic(lo, hi);
}

VariationParams RunConfig::make_params() const {
    CellGrid cg = make_cell_grid();
    double cutoff = default_outer_cutoff(cg.grid().curve(), cg.root_box(), corpus_box());
    return VariationParams(r, cutoff);
}

QuadratureConfig RunConfig::make_quadrature() const { return QuadratureConfig{cells_per_octave}; }

SparseEngineConfig RunConfig::make_engine_config() const {
    SparseEngineConfig ec;
    ec.p = p;
    ec.kappa = 3.0;  // grid constant 2 plus one, re-derived by the grid suite
    ec.height = 0.0;
    ec.max_depth = max_depth;
    ec.tail.kappa = ec.kappa;
    ec.tail.esssup_samples = esssup_samples;
    ec.quad = make_quadrature();
    return ec;
}

std::vector<CorpusEntry> build_corpus(const RunConfig& cfg) {
    std::vector<CorpusEntry> corpus;
    const Box box = cfg.corpus_box();
    const IVec cells = cfg.corpus_cells();
    const int d = cfg.dimension;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int i = 0; i < cfg.corpus_count; ++i) {
        const std::string kind = cfg.corpus_kinds[static_cast<std::size_t>(i) % cfg.corpus_kinds.size()];
        TestFunctionParams params;
        params.seed = cfg.seed + static_cast<std::uint64_t>(i) * 7919u;
        std::string name = kind + "-" + std::to_string(i);
        if (kind == "constant") {
            params.constant = 0.5 + unif(rng);
            corpus.push_back({name, make_test_function(TestFunctionKind::Constant, box, cells, params), true});
        } else if (kind == "linear-ramp") {
            for (int a = 0; a < d; ++a) params.ramp_gradient[a] = unif(rng) / (box.hi[a] - box.lo[a]);
            params.ramp_offset = 0.25 * unif(rng);
            corpus.push_back({name, make_test_function(TestFunctionKind::LinearRamp, box, cells, params), true});
        } else if (kind == "sigmoid-product") {
            for (int a = 0; a < d; ++a) {
                params.sigmoid_rate[a] = (2.0 + 6.0 * unif(rng)) / (box.hi[a] - box.lo[a]);
                params.sigmoid_center[a] = box.lo[a] + (0.3 + 0.4 * unif(rng)) * (box.hi[a] - box.lo[a]);
            }
            corpus.push_back(
                {name, make_test_function(TestFunctionKind::SigmoidProduct, box, cells, params), true});
        } else if (kind == "upper-set-indicator") {
            for (int a = 0; a < d; ++a)
                params.threshold[a] = box.lo[a] + (0.3 + 0.35 * unif(rng)) * (box.hi[a] - box.lo[a]);
            corpus.push_back(
                {name, make_test_function(TestFunctionKind::UpperSetIndicator, box, cells, params), true});
        } else if (kind == "random-monotone") {
            corpus.push_back(
                {name, make_test_function(TestFunctionKind::RandomMonotone, box, cells, params), true});
        } else if (kind == "upper-set-staircase") {
            // geometric sum of nested upper-set indicators whose corners
            // accumulate at Q0's upper corner: the exceedance sets
            // {f > C <f>} grade through the rings, so the stopping-time
            // recursion actually descends
            CellGrid cg = cfg.make_cell_grid();
            Box q0box = cg.root_box();
            LatticeFunction acc = make_test_function(TestFunctionKind::Constant, box, cells,
                                                     [] {
                                                         TestFunctionParams z;
                                                         z.constant = 0.0;
                                                         return z;
                                                     }());
            // corners halve toward Q0's upper corner down to the cell scale
            // and ring values double inward, so the exceedance sets regrade
            // at every localization and the stopping time descends
            const int levels = cfg.depth();
            double weight = 1.0, weight_sum = 0.0;
            for (int level = 1; level <= levels; ++level) {
                TestFunctionParams tp;
                const double depth_frac = std::ldexp(0.75 + 0.2 * unif(rng), -level);
                for (int a = 0; a < d; ++a)
                    tp.threshold[a] = q0box.hi[a] - depth_frac * (q0box.hi[a] - q0box.lo[a]);
                acc = LatticeFunction::sum(
                    acc, make_test_function(TestFunctionKind::UpperSetIndicator, box, cells, tp).scaled(weight));
                weight_sum += weight;
                weight *= 2.0;
            }
            corpus.push_back({name, acc.scaled(1.0 / weight_sum), true});
        } else {
            throw std::invalid_argument("config: unknown corpus kind '" + kind + "'");
        }
    }

    // labeled non-monotone controls (sec. 2 remark): run through the same
    // pipeline with constants reported, never asserted
    for (int i = 0; i < cfg.nonmonotone_controls; ++i) {
        const double fx = 2.0 + 2.0 * unif(rng);
        const double fy = 1.0 + 2.0 * unif(rng);
        Vec width = box.sides();
        Box b = box;
        auto f = LatticeFunction::from_sampler(
            b, cells,
            [&, fx, fy](const Vec& x) {
                double v = 1.0;
                for (int a = 0; a < d; ++a) {
                    double t = (x[a] - b.lo[a]) / width[a];
                    v *= 0.55 + 0.45 * std::sin((fx + a * fy) * t * 6.283185307179586);
                }
                return v;
            },
            MonotoneDir::Unknown);
        corpus.push_back({"nonmonotone-control-" + std::to_string(i), std::move(f), false});
    }
    return corpus;
}

}  // namespace varsparse
