#include "doctest.h"

#include <cmath>
#include <random>

#include "varsparse/curve.hpp"

using namespace varsparse;

TEST_CASE("gamma_eval on the standard curve") {
    auto c2 = MonomialCurve::standard(2);
    Vec p = gamma_eval(c2, 2.0);
    CHECK(p[0] == 2.0);
    CHECK(p[1] == 4.0);

    auto c3 = MonomialCurve::standard(3);
    p = gamma_eval(c3, -1.0);
    CHECK(p[0] == -1.0);
    CHECK(p[1] == 1.0);
    CHECK(p[2] == -1.0);

    auto c4 = MonomialCurve::standard(4);
    p = gamma_eval(c4, 0.0);
    for (int i = 0; i < 4; ++i) CHECK(p[i] == 0.0);
}

TEST_CASE("dilate_point") {
    auto c2 = MonomialCurve::standard(2);
    Vec x{};
    x[0] = 1.0;
    x[1] = 1.0;
    Vec y = dilate_point(AnisotropicDilation(c2, 2.0), x);
    CHECK(y[0] == 2.0);
    CHECK(y[1] == 4.0);

    Vec z{};
    z[0] = 0.37;
    z[1] = -1.84;
    Vec id = dilate_point(AnisotropicDilation(c2, 1.0), z);
    CHECK(id[0] == z[0]);
    CHECK(id[1] == z[1]);

    Vec w{};
    w[0] = 4.0;
    w[1] = 16.0;
    Vec h = dilate_point(AnisotropicDilation(c2, 0.5), w);
    CHECK(h[0] == 2.0);
    CHECK(h[1] == 4.0);

    CHECK_THROWS_AS(AnisotropicDilation(c2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnisotropicDilation(c2, -2.0), std::invalid_argument);
}

TEST_CASE("dilation group law and curve equivariance") {
    auto c3 = MonomialCurve::standard(3);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.1, 4.0);
    std::uniform_real_distribution<double> pt(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        double s = unif(rng), t = unif(rng);
        Vec x{};
        for (int i = 0; i < 3; ++i) x[i] = pt(rng);
        Vec a = dilate_point(AnisotropicDilation(c3, s), dilate_point(AnisotropicDilation(c3, t), x));
        Vec b = dilate_point(AnisotropicDilation(c3, s * t), x);
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(a[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(b[i])));

        double lam = unif(rng), u = unif(rng);
        Vec lhs = gamma_eval(c3, lam * u);
        Vec rhs = dilate_point(AnisotropicDilation(c3, lam), gamma_eval(c3, u));
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(lhs[i] - rhs[i]) <= 1e-12 * std::max(1.0, std::abs(rhs[i])));
    }
}

TEST_CASE("curve validation") {
    CHECK_THROWS_AS(MonomialCurve::standard(1), std::invalid_argument);
    CHECK_THROWS_AS(MonomialCurve::with_exponents(2, {2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MonomialCurve::with_exponents(2, {0.5, 2.0}), std::invalid_argument);
    auto real = MonomialCurve::with_exponents(2, {1.0, 2.5});
    CHECK(!real.integer_exponents());
    CHECK(real.floor_k_alpha(3, 1) == 7);   // floor(3 * 2.5)
    CHECK(real.floor_k_alpha(-1, 1) == -3); // floor(-2.5)
    CHECK_THROWS_AS(real.eval(-1.0), std::domain_error);
}
