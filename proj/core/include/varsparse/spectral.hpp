#pragma once

#include "varsparse/curve.hpp"
#include "varsparse/lattice_function.hpp"

#include <complex>
#include <span>

namespace varsparse {

/// The annulus measure nu_{j,s}: <nu_{j,s}, f> = int_{s<=|u|<=2} f(gamma(2^j u)) du/u.
struct AnnulusMeasure {
    int j = 0;
    double s = 1.0;  // in [1, 2]
    MonomialCurve curve = MonomialCurve::standard(2);

    AnnulusMeasure(int j_, double s_, MonomialCurve c);
};

struct OscQuadConfig {
    double tol = 1e-8;          // mesh-doubling self-validation target
    bool validate = true;       // sweeps switch this off and rely on density
    int min_cells = 64;
    double cells_per_period = 6.0;
    int max_doublings = 10;
};

/// int_{u_lo<=|u|<=u_hi} exp(i xi . gamma(scale*u)) du/u, both branches,
/// composite two-point Gauss-Legendre with oscillation-adapted density.
std::complex<double> oscillatory_annulus_fourier(const MonomialCurve& curve, double scale, double u_lo,
                                                 double u_hi, const Vec& xi, const OscQuadConfig& cfg = {});

/// Fourier transform of nu_{j,s} at frequency xi (direct phase at scale 2^j,
/// no reduction to the base measure; the dilation covariance is a checkable
/// identity, not an implementation shortcut).
std::complex<double> measure_fourier(const AnnulusMeasure& m, const Vec& xi, const OscQuadConfig& cfg = {});

/// Anisotropic gauge rho(xi) = max_i |xi_i|^{1/alpha_i}; homogeneous of
/// degree one under t^D.
double rho_gauge(const MonomialCurve& curve, const Vec& xi);

/// Single-scale multiplier of A_lambda (annulus lambda/2 < |t| <= lambda).
std::complex<double> single_scale_multiplier(const MonomialCurve& curve, double lambda, const Vec& xi,
                                             const OscQuadConfig& cfg = {});

struct DecaySampleRow {
    double rho_dilated = 0.0;  // rho(2^{jD} xi)
    double nuhat_abs = 0.0;
    double bound = 0.0;  // min(rho^{-1/d}, rho^{1/d})
};

struct DecayCheckConfig {
    std::vector<int> j_values{-2, 0, 2};
    std::vector<double> s_values{1.0, 1.25, 1.5, 1.75};
    int directions = 6;
    std::uint64_t seed = 2024;
    int mag_lo = -8;
    int mag_hi = 5;
    double mag_offset = 0.0;  // log2 offset; disjoint refits use 0.5
    OscQuadConfig quad{.validate = false};
};

struct DecayCheckReport {
    double fitted_c = 0.0;  // smallest C covering all samples of Eq-4.9 form
    std::int64_t samples = 0;
    std::vector<double> ray_slopes;  // log-log envelope slope per direction
    std::vector<DecaySampleRow> rows;
};

/// Envelope fit of |nu_{j,s}((2^j s)^D xi)| <= C min(|2^{jD}xi|^{-1/d}, |2^{jD}xi|^{1/d}).
DecayCheckReport decay_check(const MonomialCurve& curve, const DecayCheckConfig& cfg);

struct L2SweepReport {
    std::vector<int> k_values;
    std::vector<double> lhs;     // sum_j int_{Delta_k^j} |nuhat|^2 |fhat|^2
    std::vector<double> ratios;  // lhs / (2^{-|k|/d} ||f||^2)
    double f_norm_sq = 0.0;
};

/// Frequency-annulus Plancherel sums: for each k, sum over j and lattice
/// modes xi in Delta_k^j = {2^{-k-1} <= rho(2^{jD}xi) <= 2^{-k+1}} of
/// |nuhat_{0,1}(2^{jD}xi)|^2 |fhat(xi)|^2. Cell counts must be powers of two.
L2SweepReport single_scale_l2_check(const MonomialCurve& curve, const LatticeFunction& f, int k_lo, int k_hi,
                                    const OscQuadConfig& quad = {.validate = false});

/// Same sum evaluated on an explicit mode list (synthetic spectra, audits).
L2SweepReport l2_sweep_from_spectrum(const MonomialCurve& curve, std::span<const Vec> mode_xi,
                                     std::span<const double> mode_weight, double f_norm_sq, int k_lo,
                                     int k_hi, const OscQuadConfig& quad = {.validate = false});

/// Direct j-window sum at one mode, for the single-mode audit.
double l2_single_mode_sum(const MonomialCurve& curve, const Vec& xi, int k, const OscQuadConfig& quad = {.validate = false});

struct TranslationReport {
    double fitted_eta = 0.0;  // slope of log(sup) vs log(normalized offset)
    std::vector<double> offset_norms;
    std::vector<double> values;
    bool monotone = false;  // values nonincreasing down the halving ladder
};

/// p = 2 multiplier form of the translation continuity bound: for offsets y
/// on a halving ladder, sup over xi samples of |m_lambda(xi)| |1 - e^{i y.xi}|
/// against the anisotropically normalized |(y_1/lambda^{a_1}, ...)|.
TranslationReport translation_continuity_check(const MonomialCurve& curve, double lambda, const Vec& y_dir,
                                               double y_scale, int ladder, std::span<const Vec> xi_samples,
                                               const OscQuadConfig& quad = {});

/// The exponent region Omega(d): trapezoid with vertices (0,0), (1,1),
/// (2/(d+1), 2(d-1)/(d(d+1))), ((d^2-d+2)/(d(d+1)), (d-1)/(d+1)).
struct TrapezoidRegion {
    int d = 2;
    explicit TrapezoidRegion(int dim);
    std::array<std::array<double, 2>, 4> vertices() const;  // hull order
};

/// Convex-hull membership, boundary inclusive.
bool trapezoid_contains(const TrapezoidRegion& region, double inv_p, double inv_q);

}  // namespace varsparse
