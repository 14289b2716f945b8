#include "varsparse/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace varsparse {

namespace {

constexpr double kInvSqrt3 = 0.57735026918962576451;

double phase_bound(const MonomialCurve& curve, double scale, double u_hi, const Vec& xi) {
    double m = 0.0;
    for (int i = 0; i < curve.dim(); ++i) m += std::abs(xi[i]) * curve.pow_alpha(scale * u_hi, i);
    return m;
}

std::complex<double> osc_once(const MonomialCurve& curve, double scale, double u_lo, double u_hi,
                              const Vec& xi, std::int64_t cells) {
    const int d = curve.dim();
    const double h = (u_hi - u_lo) / static_cast<double>(cells);
    double acc_re = 0.0, acc_im = 0.0;
    for (std::int64_t c = 0; c < cells; ++c) {
        const double mid = u_lo + (static_cast<double>(c) + 0.5) * h;
        for (int node = 0; node < 2; ++node) {
            const double u = mid + (node == 0 ? -0.5 : 0.5) * h * kInvSqrt3;
            Vec g = curve.eval(scale * u);
            double phi_p = 0.0, phi_m = 0.0;
            for (int i = 0; i < d; ++i) {
                phi_p += xi[i] * g[i];
                phi_m += xi[i] * (curve.alpha_int(i) % 2 == 0 ? g[i] : -g[i]);
            }
            // [e^{i phi+} - e^{i phi-}] / u, weight h/2
            acc_re += (std::cos(phi_p) - std::cos(phi_m)) / u;
            acc_im += (std::sin(phi_p) - std::sin(phi_m)) / u;
        }
    }
    return {acc_re * 0.5 * h, acc_im * 0.5 * h};
}

}  // namespace

AnnulusMeasure::AnnulusMeasure(int j_, double s_, MonomialCurve c) : j(j_), s(s_), curve(std::move(c)) {
    if (!(s >= 1.0 && s <= 2.0)) throw std::invalid_argument("AnnulusMeasure: s must lie in [1,2]");
}

std::complex<double> oscillatory_annulus_fourier(const MonomialCurve& curve, double scale, double u_lo,
                                                 double u_hi, const Vec& xi, const OscQuadConfig& cfg) {
    if (!(u_lo > 0.0) || u_lo > u_hi) throw std::invalid_argument("oscillatory_annulus_fourier: bad annulus");
    if (!curve.integer_exponents())
        throw std::invalid_argument("oscillatory_annulus_fourier: requires integer exponents");
    if (u_lo == u_hi) return {0.0, 0.0};

    const double periods = phase_bound(curve, scale, u_hi, xi) / (2.0 * std::numbers::pi);
    std::int64_t cells = std::max<std::int64_t>(
        cfg.min_cells, static_cast<std::int64_t>(std::ceil(periods * cfg.cells_per_period)));
    cells = std::min<std::int64_t>(cells, std::int64_t{1} << 20);

    std::complex<double> v = osc_once(curve, scale, u_lo, u_hi, xi, cells);
    if (cfg.validate) {
        for (int it = 0; it < cfg.max_doublings; ++it) {
            cells *= 2;
            std::complex<double> v2 = osc_once(curve, scale, u_lo, u_hi, xi, cells);
            if (std::abs(v2 - v) < cfg.tol) {
                v = v2;
                break;
            }
            v = v2;
        }
    }
    return v;
}

std::complex<double> measure_fourier(const AnnulusMeasure& m, const Vec& xi, const OscQuadConfig& cfg) {
    return oscillatory_annulus_fourier(m.curve, std::ldexp(1.0, m.j), m.s, 2.0, xi, cfg);
}

double rho_gauge(const MonomialCurve& curve, const Vec& xi) {
    double r = 0.0;
    for (int i = 0; i < curve.dim(); ++i)
        r = std::max(r, std::pow(std::abs(xi[i]), 1.0 / curve.alpha(i)));
    return r;
}

std::complex<double> single_scale_multiplier(const MonomialCurve& curve, double lambda, const Vec& xi,
                                             const OscQuadConfig& cfg) {
    if (!(lambda > 0.0)) throw std::invalid_argument("single_scale_multiplier: lambda must be positive");
    return oscillatory_annulus_fourier(curve, lambda, 0.5, 1.0, xi, cfg);
}

DecayCheckReport decay_check(const MonomialCurve& curve, const DecayCheckConfig& cfg) {
    const int d = curve.dim();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    // base directions normalized to rho = 1; every coordinate must carry a
    // nontrivial share of the gauge, otherwise its phase stays below one
    // oscillation across the sampled window and the ray's envelope sits in
    // the pre-asymptotic regime (the C-fit still covers such rays, the
    // slope regression would not measure decay)
    std::vector<Vec> dirs;
    while (static_cast<int>(dirs.size()) < cfg.directions) {
        Vec g{};
        double r = 0.0;
        for (int i = 0; i < d; ++i) {
            g[i] = unif(rng);
            r = std::max(r, std::pow(std::abs(g[i]), 1.0 / curve.alpha(i)));
        }
        if (r < 0.1) continue;
        bool active = true;
        for (int i = 0; i < d; ++i) {
            g[i] /= curve.pow_alpha(r, i);
            if (std::pow(std::abs(g[i]), 1.0 / curve.alpha(i)) < 0.3) active = false;
        }
        if (active) dirs.push_back(g);
    }

    DecayCheckReport rep;
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        std::vector<double> env_log2mag, env_log2val;
        for (int mag = cfg.mag_lo; mag <= cfg.mag_hi; ++mag) {
            const double rho = std::exp2(static_cast<double>(mag) + cfg.mag_offset);
            Vec xi{};
            for (int i = 0; i < d; ++i) xi[i] = dirs[di][i] * curve.pow_alpha(rho, i);
            double envelope = 0.0;
            for (int j : cfg.j_values) {
                const double rho_dil = std::ldexp(rho, j);
                const double bound = std::min(std::pow(rho_dil, -1.0 / d), std::pow(rho_dil, 1.0 / d));
                for (double s : cfg.s_values) {
                    Vec arg{};
                    const double js = std::ldexp(s, j);  // 2^j * s
                    for (int i = 0; i < d; ++i) arg[i] = xi[i] * curve.pow_alpha(js, i);
                    const double val = std::abs(measure_fourier(AnnulusMeasure(j, s, curve), arg, cfg.quad));
                    ++rep.samples;
                    rep.fitted_c = std::max(rep.fitted_c, val / bound);
                    rep.rows.push_back({rho_dil, val, bound});
                    if (j == 0) envelope = std::max(envelope, val);
                }
            }
            // regress past the oscillation onset (every coordinate phase
            // above ~1 once rho >= 2^2 for admitted directions)
            if (envelope > 1e-13 && mag >= 2) {
                env_log2mag.push_back(static_cast<double>(mag) + cfg.mag_offset);
                env_log2val.push_back(std::log2(envelope));
            }
        }
        // least-squares slope of the decay-side envelope
        double slope = 0.0;
        if (env_log2mag.size() >= 3) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(env_log2mag.size());
            for (std::size_t i = 0; i < env_log2mag.size(); ++i) {
                sx += env_log2mag[i];
                sy += env_log2val[i];
                sxx += env_log2mag[i] * env_log2mag[i];
                sxy += env_log2mag[i] * env_log2val[i];
            }
            slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        rep.ray_slopes.push_back(slope);
    }
    return rep;
}

namespace {

// iterative radix-2 FFT along one axis of a d-dimensional complex array
void fft_axis(std::vector<std::complex<double>>& a, int d, const IVec& dims, const IVec& strides, int axis) {
    const std::int64_t n = dims[axis];
    if (n == 1) return;
    if ((n & (n - 1)) != 0) throw std::invalid_argument("fft: cell counts must be powers of two");
    IVec outer = dims;
    outer[axis] = 1;
    std::vector<std::complex<double>> line(static_cast<std::size_t>(n));
    for_each_index(d, outer, [&](const IVec& base) {
        std::size_t off = 0;
        for (int i = 0; i < d; ++i) off += static_cast<std::size_t>(base[i] * strides[i]);
        const std::size_t st = static_cast<std::size_t>(strides[axis]);
        for (std::int64_t i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = a[off + st * static_cast<std::size_t>(i)];
        // bit reversal
        for (std::int64_t i = 1, rev = 0; i < n; ++i) {
            std::int64_t bit = n >> 1;
            for (; rev & bit; bit >>= 1) rev ^= bit;
            rev ^= bit;
            if (i < rev) std::swap(line[static_cast<std::size_t>(i)], line[static_cast<std::size_t>(rev)]);
        }
        for (std::int64_t len = 2; len <= n; len <<= 1) {
            const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
            const std::complex<double> wl(std::cos(ang), std::sin(ang));
            for (std::int64_t i = 0; i < n; i += len) {
                std::complex<double> w(1.0, 0.0);
                for (std::int64_t k = 0; k < len / 2; ++k) {
                    auto u = line[static_cast<std::size_t>(i + k)];
                    auto v = line[static_cast<std::size_t>(i + k + len / 2)] * w;
                    line[static_cast<std::size_t>(i + k)] = u + v;
                    line[static_cast<std::size_t>(i + k + len / 2)] = u - v;
                    w *= wl;
                }
            }
        }
        for (std::int64_t i = 0; i < n; ++i) a[off + st * static_cast<std::size_t>(i)] = line[static_cast<std::size_t>(i)];
    });
}

}  // namespace

L2SweepReport l2_sweep_from_spectrum(const MonomialCurve& curve, std::span<const Vec> mode_xi,
                                     std::span<const double> mode_weight, double f_norm_sq, int k_lo,
                                     int k_hi, const OscQuadConfig& quad) {
    const int d = curve.dim();
    L2SweepReport rep;
    rep.f_norm_sq = f_norm_sq;
    for (int k = k_lo; k <= k_hi; ++k) rep.k_values.push_back(k);
    rep.lhs.assign(rep.k_values.size(), 0.0);

    for (std::size_t mi = 0; mi < mode_xi.size(); ++mi) {
        const Vec& xi = mode_xi[mi];
        const double w = mode_weight[mi];
        if (w == 0.0) continue;
        const double rho = rho_gauge(curve, xi);
        if (rho == 0.0) continue;
        const double lr = std::log2(rho);

        // magnitudes |nuhat_{0,1}(2^{jD} xi)|^2 memoized over the j span
        const int j_min = static_cast<int>(std::ceil(-k_hi - 1 - lr));
        const int j_max = static_cast<int>(std::floor(-k_lo + 1 - lr));
        std::vector<double> mag2(static_cast<std::size_t>(std::max(0, j_max - j_min + 1)), -1.0);
        auto mag2_at = [&](int j) {
            auto& slot = mag2[static_cast<std::size_t>(j - j_min)];
            if (slot < 0.0) {
                Vec arg{};
                for (int i = 0; i < d; ++i) arg[i] = std::ldexp(xi[i], j * curve.alpha_int(i));
                const double v = std::abs(measure_fourier(AnnulusMeasure(0, 1.0, curve), arg, quad));
                slot = v * v;
            }
            return slot;
        };

        for (std::size_t ki = 0; ki < rep.k_values.size(); ++ki) {
            const int k = rep.k_values[ki];
            // Delta_k^j: 2^{-k-1} <= 2^j rho <= 2^{-k+1}
            const int lo = static_cast<int>(std::ceil(-k - 1 - lr - 1e-12));
            const int hi = static_cast<int>(std::floor(-k + 1 - lr + 1e-12));
            for (int j = lo; j <= hi; ++j)
                if (j >= j_min && j <= j_max) rep.lhs[ki] += w * mag2_at(j);
        }
    }

    rep.ratios.resize(rep.k_values.size());
    for (std::size_t ki = 0; ki < rep.k_values.size(); ++ki) {
        const double target = std::exp2(-std::abs(static_cast<double>(rep.k_values[ki])) / d) * f_norm_sq;
        rep.ratios[ki] = (target > 0.0) ? rep.lhs[ki] / target : 0.0;
    }
    return rep;
}

L2SweepReport single_scale_l2_check(const MonomialCurve& curve, const LatticeFunction& f, int k_lo, int k_hi,
                                    const OscQuadConfig& quad) {
    const int d = f.dim();
    const IVec& dims = f.cells();
    std::int64_t total = f.cell_count();
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = f.values()[i];

    IVec strides{};
    strides[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];
    for (int axis = 0; axis < d; ++axis) fft_axis(spec, d, dims, strides, axis);

    // Parseval with the lattice measure: ||f||^2 = sum |fhat|^2 cellvol / N
    const double weight_scale = f.cell_volume() / static_cast<double>(total);
    std::vector<Vec> mode_xi;
    std::vector<double> mode_w;
    mode_xi.reserve(static_cast<std::size_t>(total));
    mode_w.reserve(static_cast<std::size_t>(total));
    double norm_sq = 0.0;
    for_each_index(d, dims, [&](const IVec& idx) {
        std::size_t off = 0;
        for (int i = 0; i < d; ++i) off += static_cast<std::size_t>(idx[i] * strides[i]);
        const double w = std::norm(spec[off]) * weight_scale;
        norm_sq += w;
        Vec xi{};
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            std::int64_t signed_m = (idx[i] < dims[i] / 2) ? idx[i] : idx[i] - dims[i];
            xi[i] = 2.0 * std::numbers::pi * static_cast<double>(signed_m) / (f.box().hi[i] - f.box().lo[i]);
            if (signed_m != 0) zero = false;
        }
        if (zero) return;  // nuhat(0) = 0 contributes nothing
        mode_xi.push_back(xi);
        mode_w.push_back(w);
    });
    return l2_sweep_from_spectrum(curve, mode_xi, mode_w, norm_sq, k_lo, k_hi, quad);
}

double l2_single_mode_sum(const MonomialCurve& curve, const Vec& xi, int k, const OscQuadConfig& quad) {
    const int d = curve.dim();
    const double rho = rho_gauge(curve, xi);
    if (rho == 0.0) return 0.0;
    const double lr = std::log2(rho);
    const int lo = static_cast<int>(std::ceil(-k - 1 - lr - 1e-12));
    const int hi = static_cast<int>(std::floor(-k + 1 - lr + 1e-12));
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) {
        Vec arg{};
        for (int i = 0; i < d; ++i) arg[i] = std::ldexp(xi[i], j * curve.alpha_int(i));
        const double v = std::abs(measure_fourier(AnnulusMeasure(0, 1.0, curve), arg, quad));
        acc += v * v;
    }
    return acc;
}

TranslationReport translation_continuity_check(const MonomialCurve& curve, double lambda, const Vec& y_dir,
                                               double y_scale, int ladder, std::span<const Vec> xi_samples,
                                               const OscQuadConfig& quad) {
    const int d = curve.dim();
    if (ladder < 2) throw std::invalid_argument("translation_continuity_check: ladder needs >= 2 rungs");
    for (int i = 0; i < d; ++i)
        if (!(std::abs(y_scale * y_dir[i]) < curve.pow_alpha(lambda, i)))
            throw std::invalid_argument("translation_continuity_check: offset out of range (|y_i| < lambda^{a_i})");

    std::vector<double> mags(xi_samples.size());
    for (std::size_t i = 0; i < xi_samples.size(); ++i)
        mags[i] = std::abs(single_scale_multiplier(curve, lambda, xi_samples[i], quad));

    TranslationReport rep;
    for (int step = 0; step < ladder; ++step) {
        const double scale = y_scale * std::exp2(-static_cast<double>(step));
        Vec y{};
        double norm_sq = 0.0;
        for (int i = 0; i < d; ++i) {
            y[i] = scale * y_dir[i];
            const double ni = y[i] / curve.pow_alpha(lambda, i);
            norm_sq += ni * ni;
        }
        double sup = 0.0;
        for (std::size_t i = 0; i < xi_samples.size(); ++i) {
            double dot = 0.0;
            for (int a = 0; a < d; ++a) dot += y[a] * xi_samples[i][a];
            sup = std::max(sup, mags[i] * std::abs(1.0 - std::polar(1.0, dot)));
        }
        rep.offset_norms.push_back(std::sqrt(norm_sq));
        rep.values.push_back(sup);
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.values.size(); ++i)
        if (rep.values[i] > rep.values[i - 1] * (1.0 + 1e-12)) rep.monotone = false;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::int64_t n = 0;
    for (std::size_t i = 0; i < rep.values.size(); ++i) {
        if (rep.values[i] <= 0.0) continue;
        const double lx = std::log(rep.offset_norms[i]);
        const double ly = std::log(rep.values[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n >= 2) rep.fitted_eta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return rep;
}

TrapezoidRegion::TrapezoidRegion(int dim) : d(dim) {
    if (d < 2) throw std::invalid_argument("TrapezoidRegion: dimension must be >= 2");
}

std::array<std::array<double, 2>, 4> TrapezoidRegion::vertices() const {
    const double dd = static_cast<double>(d);
    return {{{0.0, 0.0},
             {2.0 / (dd + 1.0), 2.0 * (dd - 1.0) / (dd * (dd + 1.0))},
             {(dd * dd - dd + 2.0) / (dd * (dd + 1.0)), (dd - 1.0) / (dd + 1.0)},
             {1.0, 1.0}}};
}

bool trapezoid_contains(const TrapezoidRegion& region, double inv_p, double inv_q) {
    const auto v = region.vertices();
    // counter-clockwise hull; degenerate (d = 2) repeated vertex yields a
    // zero-length edge whose test is vacuous
    constexpr double eps = 1e-14;
    for (int i = 0; i < 4; ++i) {
        const auto& a = v[static_cast<std::size_t>(i)];
        const auto& b = v[static_cast<std::size_t>((i + 1) % 4)];
        const double cross = (b[0] - a[0]) * (inv_q - a[1]) - (b[1] - a[1]) * (inv_p - a[0]);
        if (cross < -eps) return false;
    }
    return true;
}

}  // namespace varsparse
