// Acceptance suite: each criterion runs at its stated tolerance and prints
// one pass/fail line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "varsparse/suites.hpp"

using namespace varsparse;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

RunConfig base_config() {
    RunConfig cfg;
    cfg.dimension = 2;
    cfg.resolution = 16;  // 16 x 256 gamma-adapted cells = 64^2 lattice points
    cfg.k_min = -12;
    cfg.k_max = 8;
    cfg.r = 3.0;
    cfg.p = 2.0;
    cfg.corpus_count = 10;
    cfg.nonmonotone_controls = 0;
    cfg.seed = 20240501;
    cfg.max_depth = 4;
    cfg.esssup_samples = 8;
    cfg.validate();
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- C1, C2
Outcome c01_variation_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> len(1, 12);
    const double rs[] = {1.0, 2.0, 2.5, 3.0, 5.0};
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(rng)));
        for (auto& v : a) v = unif(rng);
        for (double r : rs) {
            double dp = r_variation(a, r);
            double oracle = r_variation_enumerated(a, r);
            worst = std::max(worst, std::abs(dp - oracle) / std::max(1.0, std::abs(oracle)));
        }
    }
    return {worst <= 1e-12, "max rel err " + fmt(worst)};
}

Outcome c02_monotone_identity() {
    std::mt19937_64 rng(102);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> len(2, 30);
    const double rs[] = {1.0, 1.5, 2.0, 3.0, 4.5, 8.0};
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(rng)));
        double acc = -1.0 + 2.0 * unif(rng);
        bool decreasing = trial % 2 == 1;
        for (auto& v : a) {
            acc += decreasing ? -unif(rng) : unif(rng);
            v = acc;
        }
        double endpoints = std::abs(a.back() - a.front());
        for (double r : rs)
            worst = std::max(worst, std::abs(r_variation(a, r) - endpoints) / std::max(1.0, endpoints));
    }
    return {worst <= 1e-12, "max rel err " + fmt(worst)};
}

// -------------------------------------------------------------------- C3
Outcome c03_grid_properties() {
    std::int64_t probes = 0, failures = 0, pairs = 0, violations = 0;
    bool chains = true;
    double worst_ratio = 0.0;
    for (int d : {2, 3}) {
        GridConfig gc;
        gc.curve = MonomialCurve::standard(d);
        gc.k_min = -5;
        gc.k_max = 5;
        gc.convention = ShiftConvention::AlternatingThird;
        GammaGrid grid(gc);
        const int window = (d == 2) ? 2 : 1;
        IVec span{};
        for (int i = 0; i < d; ++i) span[i] = 3;
        for_each_index(d, span, [&](const IVec& idx) {
            Shift s{};
            for (int i = 0; i < d; ++i) s[i] = static_cast<std::uint8_t>(idx[i]);
            for (int k = -4; k <= 4; ++k) {
                auto part = grid.check_partition(s, k, k - 1, window);
                probes += part.probes;
                failures += part.failures;
            }
            auto nest = grid.check_nesting(s, -4, 4, window);
            pairs += nest.pairs;
            violations += nest.violations;
            worst_ratio = std::max(worst_ratio, grid.check_parent_ratio(s, window));
            Vec x{};
            for (int i = 0; i < d; ++i) x[i] = 0.31 + 0.17 * i;
            chains = chains && grid.check_shrinking_chain(s, x);
        });
        worst_ratio = std::max(worst_ratio, 0.0);
        if (worst_ratio > grid.grid_constant()) failures += 1;
    }
    bool pass = failures == 0 && violations == 0 && chains && probes > 0 && pairs > 0;
    return {pass, "partition probes " + std::to_string(probes) + ", nesting pairs " + std::to_string(pairs) +
                      ", violations " + std::to_string(violations)};
}

// -------------------------------------------------------------------- C4
Outcome c04_kappa() {
    bool ok = true;
    for (int d : {2, 3}) {
        GridConfig gc;
        gc.curve = MonomialCurve::standard(d);
        gc.k_min = -4;
        gc.k_max = 4;
        GammaGrid grid(gc);
        ok = ok && grid.grid_constant() == 2.0 && grid.kappa() == 3.0;
    }
    return {ok, "C = 2, kappa = 3 for d in {2,3}"};
}

// -------------------------------------------------------------------- C5
Outcome c05_quadrature_identities() {
    auto curve = MonomialCurve::standard(2);
    Box wide;
    wide.dim = 2;
    wide.lo[0] = 0.0;
    wide.hi[0] = 40.0;
    wide.lo[1] = -40.0;
    wide.hi[1] = 40.0;
    IVec cells{};
    cells[0] = 64;
    cells[1] = 64;
    Vec x{};
    x[0] = 20.0;
    x[1] = 5.0;

    auto cf = LatticeFunction::from_sampler(wide, cells, [](const Vec&) { return 1.0; });
    double v_const = std::abs(truncated_hilbert(cf, nullptr, curve, x, 0.3, 3.7));

    TestFunctionParams tp;
    tp.seed = 55;
    auto f = make_test_function(TestFunctionKind::RandomMonotone, wide, cells, tp);
    double whole = truncated_hilbert(f, nullptr, curve, x, 0.25, 4.0);
    double parts = 0.0;
    for (int j = -2; j < 2; ++j) parts += single_scale_average(f, nullptr, curve, x, j);
    double tel = std::abs(whole - parts) / std::max(1.0, std::abs(whole));

    auto lin = LatticeFunction::from_sampler(wide, cells, [](const Vec& y) { return y[0]; });
    double v_lin = truncated_hilbert(lin, nullptr, curve, x, 0.5, 2.0);
    double lin_err = std::abs(v_lin + 2.0 * 1.5) / 3.0;

    bool pass = v_const <= 1e-8 && tel <= 1e-10 && lin_err <= 1e-8;
    return {pass, "const " + fmt(v_const) + ", telescope " + fmt(tel) + ", linear rel " + fmt(lin_err)};
}

// -------------------------------------------------------------------- C6
Outcome c06_sign_constancy() {
    RunConfig cfg = base_config();
    auto corpus = build_corpus(cfg);
    CellGrid cg = cfg.make_cell_grid();
    auto curve = cg.grid().curve();
    QuadratureConfig quad = cfg.make_quadrature();
    std::mt19937_64 rng(106);
    std::uniform_int_distribution<std::int64_t> pick(0, cg.cell_count() - 1);
    std::uniform_real_distribution<double> ur(std::ldexp(1.0, -5), 4.0);

    std::int64_t tested = 0, bad = 0;
    for (const auto& e : corpus) {
        if (!e.monotone) continue;
        for (int xi = 0; xi < 20; ++xi) {
            Vec x = cg.cell_center(cg.unflat(static_cast<std::size_t>(pick(rng))));
            double mn = 0.0, mx = 0.0, scale = 0.0;
            for (int t = 0; t < 30; ++t) {
                double a = ur(rng), b = ur(rng);
                if (a > b) std::swap(a, b);
                if (a == b) continue;
                double v = annulus_integral(e.f, nullptr, curve, x, a, b, quad);
                mn = std::min(mn, v);
                mx = std::max(mx, v);
                scale = std::max(scale, std::abs(v));
            }
            ++tested;
            double slack = 1e-10 * std::max(1.0, scale);
            if (mn < -slack && mx > slack) ++bad;
        }
    }
    return {bad == 0, std::to_string(tested) + " (f,x) cells, sign violations " + std::to_string(bad)};
}

// -------------------------------------------------------------------- C7
Outcome c07_quasi_subadditivity() {
    RunConfig cfg = base_config();
    auto corpus = build_corpus(cfg);
    CellGrid cg = cfg.make_cell_grid();
    auto curve = cg.grid().curve();
    TruncationSet I = cfg.make_truncation();
    VariationParams params = cfg.make_params();
    QuadratureConfig quad = cfg.make_quadrature();
    const double bound = std::exp2(1.0 + 1.0 / params.r);

    std::vector<const LatticeFunction*> fs;
    for (const auto& e : corpus)
        if (e.monotone) fs.push_back(&e.f);

    double worst = -1e300;
    std::int64_t points = 0, bad = 0;
    IVec dims = cg.dims();
    for (std::size_t pi = 0; pi + 1 < fs.size() && pi < 10; pi += 2) {
        const LatticeFunction& f1 = *fs[pi];
        const LatticeFunction& f2 = *fs[pi + 1];
        LatticeFunction fsum = LatticeFunction::sum(f1, f2);
        for_each_index(2, dims, [&](const IVec& cell) {
            Vec x = cg.cell_center(cell);
            double t1 = variation_operator(f1, nullptr, curve, x, I, params, quad);
            double t2 = variation_operator(f2, nullptr, curve, x, I, params, quad);
            double ts = variation_operator(fsum, nullptr, curve, x, I, params, quad);
            double rhs = bound * (t1 + t2);
            worst = std::max(worst, ts - rhs);
            ++points;
            if (ts > rhs + 1e-12 * std::max(1.0, rhs)) ++bad;
        });
    }
    return {bad == 0 && points > 0,
            std::to_string(points) + " points, violations " + std::to_string(bad) + ", worst excess " + fmt(worst)};
}

// -------------------------------------------------------------------- C8
Outcome c08_cz_stopping_time() {
    RunConfig cfg = base_config();
    auto corpus = build_corpus(cfg);
    CellGrid cg = cfg.make_cell_grid();
    TruncationSet I = cfg.make_truncation();
    VariationParams params = cfg.make_params();
    SparseEngineConfig ec = cfg.make_engine_config();
    const double height = std::ldexp(1.0, -3);

    std::int64_t runs = 0;
    bool ok = true;
    for (const auto& e : corpus) {
        if (!e.monotone) continue;
        ++runs;
        ExceptionalSet ex = exceptional_set(cg, e.f, I, params, ec);
        ok = ok && ex.cell_count * 16 <= cg.cell_count();
        CZResult r = cz_decompose(cg, ex.cells, height);
        ok = ok && r.residual_measure == 0.0;
        ok = ok && 2 * r.selected_cells <= cg.cell_count();
        PrefixSum prefix(2, cg.dims(), ex.cells);
        for (std::size_t a = 0; a < r.selected.size() && ok; ++a) {
            auto ra = cg.range_of(r.selected[a]);
            std::int64_t tot = 1;
            for (int i = 0; i < 2; ++i) tot *= ra.hi[i] - ra.lo[i];
            ok = ok && static_cast<double>(prefix.count(ra.lo, ra.hi)) > height * static_cast<double>(tot);
            DyadicGammaCube par = cg.grid().parent(r.selected[a]);
            if (!par.same_cube(cg.root(), 2)) {
                auto rp = cg.range_of(par);
                std::int64_t ptot = 1;
                for (int i = 0; i < 2; ++i) ptot *= rp.hi[i] - rp.lo[i];
                ok = ok && static_cast<double>(prefix.count(rp.lo, rp.hi)) <= height * static_cast<double>(ptot);
            }
            for (std::size_t b = a + 1; b < r.selected.size() && ok; ++b)
                ok = ok && cg.grid().relation(r.selected[a], r.selected[b]) == CubeRelation::Disjoint;
        }
        if (!ok) break;
    }
    return {ok && runs > 0, std::to_string(runs) + " corpus stopping times audited"};
}

// --------------------------------------------------------------- C9, C10
struct PipelineResults {
    bool built = false;
    bool half_sparse = true;
    bool final_sparse = true;
    bool coverage = true;
    bool invariance = true;
    double max_fitted = 0.0;
    std::int64_t functions = 0;
};

PipelineResults run_pipeline() {
    static PipelineResults cache;
    if (cache.built) return cache;
    RunConfig cfg = base_config();
    auto corpus = build_corpus(cfg);
    CellGrid cg = cfg.make_cell_grid();
    TruncationSet I = cfg.make_truncation();
    VariationParams params = cfg.make_params();
    SparseEngineConfig ec = cfg.make_engine_config();

    PipelineResults res;
    for (const auto& e : corpus) {
        if (!e.monotone) continue;
        ++res.functions;
        SparseFamily fam = build_sparse_family(cg, e.f, I, params, ec);
        res.half_sparse = res.half_sparse && verify_sparsity(fam, 0.5).ok;
        for (const auto& n : fam.nodes)
            res.half_sparse = res.half_sparse && 2 * n.selected_child_cells <= n.cube_cells;
        SparseFamily fin = finalize_family(fam);
        res.final_sparse = res.final_sparse && fin.reselection_ok && verify_sparsity(fin, 0.125).ok;

        DominationReport rep = verify_domination(cg, e.f, I, params, ec);
        res.coverage = res.coverage && rep.flags_final_p1 == 0 && rep.flags_final_p == 0;
        res.max_fitted = std::max(res.max_fitted, rep.fitted_final_p1);
        res.coverage = res.coverage && std::isfinite(rep.fitted_final_p1) && std::isfinite(rep.fitted_final_p) &&
                       std::isfinite(rep.fitted_dyadic_p);

        DominationReport rep4 = verify_domination(cg, e.f.scaled(4.0), I, params, ec);
        res.invariance = res.invariance && rep4.family_fingerprint == rep.family_fingerprint;
        if (rep.fitted_final_p1 > 0.0)
            res.invariance = res.invariance &&
                             std::abs(rep4.fitted_final_p1 - rep.fitted_final_p1) <= 1e-9 * rep.fitted_final_p1;
    }
    res.built = true;
    cache = res;
    return cache;
}

Outcome c09_sparsity_certificates() {
    PipelineResults r = run_pipeline();
    bool pass = r.half_sparse && r.final_sparse && r.functions > 0;
    return {pass, "1/2-sparse and 1/8-sparse certificates over " + std::to_string(r.functions) + " functions"};
}

Outcome c10_domination() {
    PipelineResults r = run_pipeline();
    bool pass = r.coverage && r.invariance && r.functions > 0;
    return {pass, "zero coverage flags, max fitted constant " + fmt(r.max_fitted) + " (reported)"};
}

// ------------------------------------------------------------------- C11
Outcome c11_fourier_decay() {
    auto curve = MonomialCurve::standard(2);
    double worst_zero = 0.0;
    for (int j : {-2, 0, 2})
        for (double s : {1.0, 1.35, 1.8})
            worst_zero = std::max(worst_zero, std::abs(measure_fourier(AnnulusMeasure(j, s, curve), Vec{})));

    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    double worst_cov = 0.0;
    for (int j : {-3, -1, 1, 3})
        for (int t = 0; t < 6; ++t) {
            Vec xi{};
            xi[0] = unif(rng);
            xi[1] = unif(rng);
            Vec dil{};
            for (int i = 0; i < 2; ++i) dil[i] = std::ldexp(xi[i], j * (i + 1));
            double s = 1.0 + 0.13 * t;
            auto a = measure_fourier(AnnulusMeasure(j, s, curve), xi);
            auto b = measure_fourier(AnnulusMeasure(0, s, curve), dil);
            worst_cov = std::max(worst_cov, std::abs(a - b) / std::max(1.0, std::abs(b)));
        }

    DecayCheckConfig dc;
    dc.directions = 6;
    dc.seed = 4001;
    DecayCheckReport r1 = decay_check(curve, dc);
    DecayCheckConfig dc2 = dc;
    dc2.seed = 4002;
    dc2.mag_offset = 0.5;
    DecayCheckReport r2 = decay_check(curve, dc2);
    double ratio = (r2.fitted_c > 0) ? r1.fitted_c / r2.fitted_c : 0.0;
    double worst_slope = -1e300;
    for (double s : r1.ray_slopes) worst_slope = std::max(worst_slope, s);

    bool pass = worst_zero <= 1e-12 && worst_cov <= 1e-10 && ratio > 0.5 && ratio < 2.0 &&
                worst_slope <= -0.5 + 0.1;
    return {pass, "zero " + fmt(worst_zero) + ", cov " + fmt(worst_cov) + ", refit ratio " + fmt(ratio) +
                      ", worst slope " + fmt(worst_slope)};
}

// ------------------------------------------------------------------- C12
Outcome c12_plancherel_sums() {
    auto curve = MonomialCurve::standard(2);
    double worst_audit = 0.0;
    std::mt19937_64 rng(112);
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    for (int t = 0; t < 5; ++t) {
        Vec xi{};
        xi[0] = unif(rng);
        xi[1] = unif(rng);
        if (rho_gauge(curve, xi) == 0.0) continue;
        std::vector<Vec> modes{xi};
        std::vector<double> ws{1.0};
        for (int k : {-4, 0, 3}) {
            L2SweepReport sweep = l2_sweep_from_spectrum(curve, modes, ws, 1.0, k, k);
            double direct = l2_single_mode_sum(curve, xi, k);
            worst_audit = std::max(worst_audit, std::abs(sweep.lhs[0] - direct) / std::max(1.0, direct));
        }
    }

    Box b;
    b.dim = 2;
    for (int i = 0; i < 2; ++i) {
        b.lo[i] = 0.0;
        b.hi[i] = 1.0;
    }
    IVec cells{};
    cells[0] = 64;
    cells[1] = 64;
    bool sweep_ok = true;
    double worst_ratio_gap = 0.0;
    for (int trial = 0; trial < 2; ++trial) {
        auto f = LatticeFunction::from_sampler(b, cells, [&](const Vec&) { return unif(rng) + 4.5; });
        L2SweepReport rep = single_scale_l2_check(curve, f, -6, 6);
        double fit = 0.0, worst_odd = 0.0;
        for (std::size_t i = 0; i < rep.k_values.size(); ++i) {
            if (rep.k_values[i] % 2 == 0) fit = std::max(fit, rep.ratios[i]);
        }
        for (std::size_t i = 0; i < rep.k_values.size(); ++i)
            if (rep.k_values[i] % 2 != 0) worst_odd = std::max(worst_odd, rep.ratios[i]);
        sweep_ok = sweep_ok && fit > 0.0 && worst_odd <= 2.0 * fit;
        worst_ratio_gap = std::max(worst_ratio_gap, (fit > 0) ? worst_odd / fit : 0.0);
    }
    bool pass = worst_audit <= 1e-10 && sweep_ok;
    return {pass, "single-mode audit " + fmt(worst_audit) + ", odd/even ratio gap " + fmt(worst_ratio_gap)};
}

// ------------------------------------------------------------------- C13
Outcome c13_trapezoid() {
    TrapezoidRegion O2(2);
    auto v2 = O2.vertices();
    bool degenerate = v2[1][0] == 2.0 / 3.0 && v2[2][0] == 2.0 / 3.0 && v2[1][1] == v2[2][1] &&
                      std::abs(v2[1][1] - 1.0 / 3.0) < 1e-15;
    bool member = true;
    for (int d : {2, 3, 4}) {
        TrapezoidRegion O(d);
        for (const auto& p : O.vertices()) member = member && trapezoid_contains(O, p[0], p[1]);
    }
    bool interior = trapezoid_contains(O2, 0.5, 0.5) && !trapezoid_contains(O2, 0.5, 0.6);
    TrapezoidRegion O3(3);
    interior = interior && trapezoid_contains(O3, 0.5, 0.4) && !trapezoid_contains(O3, 0.5, 0.25);
    return {degenerate && member && interior, "vertices exact, d=2 degeneration at (2/3, 1/3)"};
}

// ------------------------------------------------------------------- C14
Outcome c14_determinism() {
    RunConfig cfg;
    cfg.dimension = 2;
    cfg.resolution = 4;
    cfg.k_min = -10;
    cfg.k_max = 8;
    cfg.corpus_count = 2;
    cfg.nonmonotone_controls = 1;
    cfg.max_depth = 2;
    cfg.esssup_samples = 4;
    cfg.seed = 777;
    cfg.validate();

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string o1 = "acceptance-det-1", o2 = "acceptance-det-2";
    std::filesystem::remove_all(o1);
    std::filesystem::remove_all(o2);
    int e1 = run_all(cfg, o1);
    int e2 = run_all(cfg, o2);
    bool pass = e1 == 0 && e2 == 0;
    std::int64_t files = 0;
    for (const auto& s : cfg.suites) {
        std::string a = slurp(o1 + "/" + s + ".json");
        std::string b = slurp(o2 + "/" + s + ".json");
        pass = pass && !a.empty() && a == b;
        ++files;
    }
    std::filesystem::remove_all(o1);
    std::filesystem::remove_all(o2);
    return {pass, std::to_string(files) + " suite reports byte-identical"};
}

}  // namespace

int main() {
    struct Entry {
        const char* id;
        const char* name;
        std::function<Outcome()> fn;
    };
    const Entry entries[] = {
        {"C01", "variation DP vs exhaustive enumeration", c01_variation_oracle},
        {"C02", "monotone-sequence endpoint identity", c02_monotone_identity},
        {"C03", "gamma-grid properties (1)-(4)", c03_grid_properties},
        {"C04", "grid constant scan and kappa = C + 1", c04_kappa},
        {"C05", "quadrature identities", c05_quadrature_identities},
        {"C06", "two-branch sign constancy for monotone inputs", c06_sign_constancy},
        {"C07", "quasi-subadditivity with constant 2^{1+1/r}", c07_quasi_subadditivity},
        {"C08", "Calderon-Zygmund stopping time accounting", c08_cz_stopping_time},
        {"C09", "sparsity certificates (1/2 and 1/(2*4^{d-1}))", c09_sparsity_certificates},
        {"C10", "pointwise sparse domination, property form", c10_domination},
        {"C11", "Fourier cancellation, covariance and decay envelope", c11_fourier_decay},
        {"C12", "single-scale Plancherel sums", c12_plancherel_sums},
        {"C13", "trapezoid Omega(d) membership", c13_trapezoid},
        {"C14", "report determinism", c14_determinism},
    };

    int failures = 0;
    for (const auto& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = e.fn();
        } catch (const std::exception& ex) {
            out = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s %s (%s; %.1fs)\n", out.pass ? "PASS" : "FAIL", e.id, e.name, out.detail.c_str(),
                    secs);
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
