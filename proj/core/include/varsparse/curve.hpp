#pragma once

#include "varsparse/types.hpp"

namespace varsparse {

/// The monomial curve t -> (t^{a_1}, ..., t^{a_d}) together with the
/// anisotropic scaling structure it induces. The standard curve has a_i = i
/// exactly; those exponents are kept as integers so that generation
/// arithmetic (floor(k*a_i)) is exact. A real-exponent configuration exists
/// for grid experiments but is kept off the standard-curve paths.
class MonomialCurve {
public:
    /// t -> (t, t^2, ..., t^d).
    static MonomialCurve standard(int d);

    /// Real exponents, strictly increasing, a_1 >= 1.
    static MonomialCurve with_exponents(int d, const std::vector<double>& alpha);

    int dim() const { return d_; }
    double alpha(int i) const { return alpha_[i]; }
    bool integer_exponents() const { return integer_; }
    int alpha_int(int i) const { return alpha_int_[i]; }

    /// Curve point at parameter t (any sign for integer exponents).
    Vec eval(double t) const;

    /// floor(k * alpha_i); exact integer product on the standard curve.
    std::int64_t floor_k_alpha(int k, int i) const;

    /// t^{alpha_i} for t > 0.
    double pow_alpha(double t, int i) const;

private:
    int d_ = 0;
    bool integer_ = true;
    std::array<double, kMaxDim> alpha_{};
    std::array<int, kMaxDim> alpha_int_{};
};

/// The one-parameter scaling x -> (t^{a_1} x_1, ..., t^{a_d} x_d), t > 0.
struct AnisotropicDilation {
    MonomialCurve curve;
    double t = 1.0;

    AnisotropicDilation(MonomialCurve c, double scale);
    Vec apply(const Vec& x) const;
};

/// Component i equals t^{alpha_i}, with monomial sign semantics for the
/// integer-exponent curve.
Vec gamma_eval(const MonomialCurve& curve, double t);

Vec dilate_point(const AnisotropicDilation& dil, const Vec& x);

}  // namespace varsparse
