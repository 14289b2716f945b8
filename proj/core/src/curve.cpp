#include "varsparse/curve.hpp"

#include <cmath>

namespace varsparse {

MonomialCurve MonomialCurve::standard(int d) {
    if (d < 2 || d > kMaxDim) throw std::invalid_argument("MonomialCurve: dimension must be in [2, 6]");
    MonomialCurve c;
    c.d_ = d;
    c.integer_ = true;
    for (int i = 0; i < d; ++i) {
        c.alpha_int_[i] = i + 1;
        c.alpha_[i] = static_cast<double>(i + 1);
    }
    return c;
}

MonomialCurve MonomialCurve::with_exponents(int d, const std::vector<double>& alpha) {
    if (d < 2 || d > kMaxDim) throw std::invalid_argument("MonomialCurve: dimension must be in [2, 6]");
    if (static_cast<int>(alpha.size()) != d) throw std::invalid_argument("MonomialCurve: exponent count != d");
    if (alpha[0] < 1.0) throw std::invalid_argument("MonomialCurve: exponents must start at >= 1");
    MonomialCurve c;
    c.d_ = d;
    c.integer_ = true;
    for (int i = 0; i < d; ++i) {
        if (i > 0 && !(alpha[i] > alpha[i - 1]))
            throw std::invalid_argument("MonomialCurve: exponents must be strictly increasing");
        c.alpha_[i] = alpha[i];
        double rounded = std::round(alpha[i]);
        if (rounded == alpha[i] && rounded <= 64.0) {
            c.alpha_int_[i] = static_cast<int>(rounded);
        } else {
            c.integer_ = false;
            c.alpha_int_[i] = 0;
        }
    }
    if (!c.integer_)
        for (int i = 0; i < d; ++i) c.alpha_int_[i] = 0;
    return c;
}

Vec MonomialCurve::eval(double t) const {
    Vec p{};
    if (integer_) {
        double acc = 1.0;
        int reached = 0;
        for (int i = 0; i < d_; ++i) {
            while (reached < alpha_int_[i]) {
                acc *= t;
                ++reached;
            }
            p[i] = acc;
        }
        return p;
    }
    if (t < 0.0) throw std::domain_error("MonomialCurve::eval: negative parameter requires integer exponents");
    for (int i = 0; i < d_; ++i) p[i] = std::pow(t, alpha_[i]);
    return p;
}

std::int64_t MonomialCurve::floor_k_alpha(int k, int i) const {
    if (integer_) return static_cast<std::int64_t>(k) * alpha_int_[i];
    return static_cast<std::int64_t>(std::floor(static_cast<double>(k) * alpha_[i]));
}

double MonomialCurve::pow_alpha(double t, int i) const {
    if (integer_) {
        double acc = 1.0;
        for (int n = 0; n < alpha_int_[i]; ++n) acc *= t;
        return acc;
    }
    return std::pow(t, alpha_[i]);
}

AnisotropicDilation::AnisotropicDilation(MonomialCurve c, double scale) : curve(std::move(c)), t(scale) {
    if (!(t > 0.0)) throw std::invalid_argument("AnisotropicDilation: scale must be positive");
}

Vec AnisotropicDilation::apply(const Vec& x) const {
    Vec y{};
    for (int i = 0; i < curve.dim(); ++i) y[i] = curve.pow_alpha(t, i) * x[i];
    return y;
}

Vec gamma_eval(const MonomialCurve& curve, double t) { return curve.eval(t); }

Vec dilate_point(const AnisotropicDilation& dil, const Vec& x) { return dil.apply(x); }

}  // namespace varsparse
