#pragma once

#include "varsparse/curve.hpp"
#include "varsparse/lattice_function.hpp"
#include "varsparse/types.hpp"

#include <span>

namespace varsparse {

/// Finite set of truncation radii for the variation operator.
struct TruncationSet {
    enum class Kind { Dyadic, General };

    std::vector<double> radii;  // strictly increasing, all positive
    Kind kind = Kind::General;

    static TruncationSet dyadic(int l_min, int l_max);
    static TruncationSet general(std::vector<double> radii);
    void validate() const;
};

struct VariationParams {
    double r = 3.0;            // Theorem-1 regime requires r > 2
    double outer_cutoff = 4.0; // R; must dominate every radius in use

    VariationParams(double r_, double cutoff);
};

/// All dt/t quadrature uses the dilation-invariant mesh: uniform cells in
/// log2 t, knots pinned to integer multiples of 1/cells_per_octave so that
/// dyadic annuli share nodes exactly (telescoping identities hold to
/// rounding), two-point Gauss-Legendre per cell.
struct QuadratureConfig {
    int cells_per_octave = 32;
};

/// int_{a<|t|<=b} f(x - gamma(t)) dt/t, both signed branches.
/// Returns 0 when a == b; throws when a > b or a <= 0.
double annulus_integral(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                        const Vec& x, double a, double b, const QuadratureConfig& quad = {});

/// H_s with explicit outer cutoff: int_{s<|t|<R} f(x - gamma(t)) dt/t.
double truncated_hilbert(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                         const Vec& x, double s, double R, const QuadratureConfig& quad = {});

/// A_j: the single dyadic annulus 2^j < |t| <= 2^{j+1}.
double single_scale_average(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                            const Vec& x, int j, const QuadratureConfig& quad = {});

/// sup over candidate pairs (eps, rho) of |int_{eps<=|t|<=rho} ... dt/t|.
double maximal_truncation(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                          const Vec& x, std::span<const std::pair<double, double>> candidates,
                          const QuadratureConfig& quad = {});

/// All (2^a, 2^b) pairs with s_min <= 2^a < 2^b <= R.
std::vector<std::pair<double, double>> dyadic_truncation_pairs(double s_min, double R);

/// Exact r-variation of a finite sequence: sup over increasing subsequences
/// of (sum |increments|^r)^{1/r}, by O(N^2) dynamic programming over the
/// best-ending-here values. Zero for a single sample.
double r_variation(std::span<const double> a, double r);

/// Brute-force enumeration over all subsequences; test oracle, O(2^N).
double r_variation_enumerated(std::span<const double> a, double r);

/// T f(x) = V^r { H_s f(x) }_{s in I}. Since the variation only sees
/// differences of the truncated transforms, it is computed from partial sums
/// of the annulus integrals between consecutive radii and is independent of
/// the outer cutoff.
double variation_operator(const LatticeFunction& f, const MaskRegion* mask, const MonomialCurve& curve,
                          const Vec& x, const TruncationSet& I, const VariationParams& params,
                          const QuadratureConfig& quad = {});

/// 2-variation of s -> int_{s<=|u|<=2} f(x - gamma(2^j u)) du/u over
/// s_samples uniform sample points in [1, 2].
double short_two_variation(const LatticeFunction& f, const MonomialCurve& curve, const Vec& x, int j,
                           int s_samples, const QuadratureConfig& quad = {});

/// Smallest dyadic power R such that the curve has left the support box for
/// every |t| >= R and every base point in q0.
double default_outer_cutoff(const MonomialCurve& curve, const Box& q0, const Box& support);

}  // namespace varsparse
