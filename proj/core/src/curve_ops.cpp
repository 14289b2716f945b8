#include "varsparse/curve_ops.hpp"

#include <cmath>
#include <limits>

namespace varsparse {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInvSqrt3 = 0.57735026918962576451;

}  // namespace

TruncationSet TruncationSet::dyadic(int l_min, int l_max) {
    if (l_min > l_max) throw std::invalid_argument("TruncationSet::dyadic: empty ladder");
    TruncationSet ts;
    ts.kind = Kind::Dyadic;
    ts.radii.reserve(static_cast<std::size_t>(l_max - l_min + 1));
    for (int l = l_min; l <= l_max; ++l) ts.radii.push_back(std::ldexp(1.0, l));
    return ts;
}

TruncationSet TruncationSet::general(std::vector<double> radii) {
    TruncationSet ts;
    ts.kind = Kind::General;
    ts.radii = std::move(radii);
    ts.validate();
    return ts;
}

void TruncationSet::validate() const {
    if (radii.empty()) throw std::invalid_argument("TruncationSet: empty radius set");
    double prev = 0.0;
    for (double s : radii) {
        if (!(s > prev)) throw std::invalid_argument("TruncationSet: radii must be positive and strictly increasing");
        prev = s;
    }
}

VariationParams::VariationParams(double r_, double cutoff) : r(r_), outer_cutoff(cutoff) {
    if (!(r > 2.0)) throw std::invalid_argument("VariationParams: r must exceed 2");
    if (!(outer_cutoff > 0.0)) throw std::invalid_argument("VariationParams: outer cutoff must be positive");
}

double annulus_integral(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                        const Vec& x, double a, double b, const QuadratureConfig& quad) {
    if (!(a > 0.0)) throw std::invalid_argument("annulus_integral: inner radius must be positive");
    if (a > b) throw std::invalid_argument("annulus_integral: empty annulus");
    if (!curve.integer_exponents())
        throw std::invalid_argument("annulus_integral: curve operators require integer exponents");
    if (a == b) return 0.0;

    const double wlo = std::log2(a);
    const double whi = std::log2(b);
    const double n = static_cast<double>(quad.cells_per_octave);
    const std::int64_t g0 = static_cast<std::int64_t>(std::floor(wlo * n));
    const std::int64_t g1 = static_cast<std::int64_t>(std::ceil(whi * n));
    const int d = curve.dim();

    double acc = 0.0;
    for (std::int64_t g = g0; g < g1; ++g) {
        double w0 = std::max(wlo, static_cast<double>(g) / n);
        double w1 = std::min(whi, static_cast<double>(g + 1) / n);
        if (!(w1 > w0)) continue;
        const double half = 0.5 * (w1 - w0);
        const double mid = 0.5 * (w0 + w1);
        for (int node = 0; node < 2; ++node) {
            const double w = mid + (node == 0 ? -half : half) * kInvSqrt3;
            const double t = std::exp2(w);
            Vec gp = curve.eval(t);
            Vec pp{}, pm{};
            for (int i = 0; i < d; ++i) {
                pp[i] = x[i] - gp[i];
                // gamma(-t): odd exponents flip sign
                pm[i] = x[i] - (curve.alpha_int(i) % 2 == 0 ? gp[i] : -gp[i]);
            }
            acc += half * (f.evaluate_masked(pp, mask) - f.evaluate_masked(pm, mask));
        }
    }
    return acc * kLn2;
}

double truncated_hilbert(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                         const Vec& x, double s, double R, const QuadratureConfig& quad) {
    if (!(s > 0.0) || s >= R) throw std::invalid_argument("truncated_hilbert: empty annulus (need 0 < s < R)");
    return annulus_integral(f, mask, curve, x, s, R, quad);
}

double single_scale_average(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                            const Vec& x, int j, const QuadratureConfig& quad) {
    return annulus_integral(f, mask, curve, x, std::ldexp(1.0, j), std::ldexp(1.0, j + 1), quad);
}

double maximal_truncation(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                          const Vec& x, std::span<const std::pair<double, double>> candidates,
                          const QuadratureConfig& quad) {
    if (candidates.empty()) throw std::invalid_argument("maximal_truncation: empty candidate set");
    double best = 0.0;
    for (const auto& [eps, rho] : candidates) {
        if (!(eps > 0.0 && eps < rho))
            throw std::invalid_argument("maximal_truncation: candidate must satisfy 0 < eps < rho");
        best = std::max(best, std::abs(annulus_integral(f, mask, curve, x, eps, rho, quad)));
    }
    return best;
}

std::vector<std::pair<double, double>> dyadic_truncation_pairs(double s_min, double R) {
    if (!(s_min > 0.0 && s_min < R)) throw std::invalid_argument("dyadic_truncation_pairs: need 0 < s_min < R");
    int lo = static_cast<int>(std::ceil(std::log2(s_min)));
    int hi = static_cast<int>(std::floor(std::log2(R)));
    std::vector<std::pair<double, double>> pairs;
    for (int a = lo; a < hi; ++a)
        for (int b = a + 1; b <= hi; ++b)
            pairs.emplace_back(std::ldexp(1.0, a), std::ldexp(1.0, b));
    return pairs;
}

double r_variation(std::span<const double> a, double r) {
    if (a.empty()) throw std::invalid_argument("r_variation: sequence must be nonempty");
    if (!(r >= 1.0)) throw std::invalid_argument("r_variation: unsupported exponent (need r >= 1)");
    const std::size_t n = a.size();
    if (n == 1) return 0.0;
    std::vector<double> best(n, 0.0);
    double overall = 0.0;
    for (std::size_t jj = 1; jj < n; ++jj) {
        double b = 0.0;
        for (std::size_t ii = 0; ii < jj; ++ii) {
            double step = std::pow(std::abs(a[jj] - a[ii]), r) + best[ii];
            if (step > b) b = step;
        }
        best[jj] = b;
        if (b > overall) overall = b;
    }
    return std::pow(overall, 1.0 / r);
}

double r_variation_enumerated(std::span<const double> a, double r) {
    if (a.empty()) throw std::invalid_argument("r_variation_enumerated: sequence must be nonempty");
    const std::size_t n = a.size();
    if (n == 1) return 0.0;
    if (n > 20) throw std::invalid_argument("r_variation_enumerated: sequence too long for enumeration");
    double overall = 0.0;
    const std::uint32_t subsets = 1u << n;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        double sum = 0.0, prev = 0.0;
        bool have_prev = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (1u << i))) continue;
            if (have_prev) sum += std::pow(std::abs(a[i] - prev), r);
            prev = a[i];
            have_prev = true;
        }
        if (sum > overall) overall = sum;
    }
    return std::pow(overall, 1.0 / r);
}

double variation_operator(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                          const Vec& x, const TruncationSet& I, const VariationParams& params,
                          const QuadratureConfig& quad) {
    I.validate();
    const std::size_t n = I.radii.size();
    if (n == 1) return 0.0;
    // a_i = H_{s_i} - H_{s_N}: tail partial sums of the consecutive annuli
    std::vector<double> partial(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        double piece = annulus_integral(f, mask, curve, x, I.radii[i], I.radii[i + 1], quad);
        partial[i] = partial[i + 1] + piece;
    }
    return r_variation(partial, params.r);
}

double short_two_variation(const LatticeFunction& f, const MonomialCurve& curve, const Vec& x, int j,
                           int s_samples, const QuadratureConfig& quad) {
    if (s_samples < 2) throw std::invalid_argument("short_two_variation: need at least two sample points");
    const double scale = std::ldexp(1.0, j);
    std::vector<double> values(static_cast<std::size_t>(s_samples), 0.0);
    // value at s = nu_{j,s} * f(x) = int_{s<=|u|<=2} f(x - gamma(2^j u)) du/u;
    // each sample is quadratured on its own interval so that shared sample
    // points of nested refinements reproduce identical values
    for (int i = 0; i + 1 < s_samples; ++i) {
        double s0 = 1.0 + static_cast<double>(i) / (s_samples - 1);
        values[static_cast<std::size_t>(i)] = annulus_integral(f, nullptr, curve, x, scale * s0, 2.0 * scale, quad);
    }
    return r_variation(values, 2.0);
}

double default_outer_cutoff(const MonomialCurve& curve, const Box& q0, const Box& support) {
    // exit along any coordinate going down: t^{a_i} > q0.hi[i] - support.lo[i]
    double exit_down = std::numeric_limits<double>::infinity();
    for (int i = 0; i < curve.dim(); ++i) {
        double gap = q0.hi[i] - support.lo[i];
        if (gap <= 0.0) return 1.0;
        exit_down = std::min(exit_down, std::pow(gap, 1.0 / curve.alpha(i)));
    }
    // exit upward in the first coordinate for the negative branch
    double exit_up = std::max(1e-300, support.hi[0] - q0.lo[0]);
    double t = std::max(exit_down, exit_up);
    return std::exp2(std::ceil(std::log2(t)));
}

}  // namespace varsparse
