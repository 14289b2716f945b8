#include "doctest.h"

#include <cmath>
#include <random>

#include "varsparse/curve_ops.hpp"

using namespace varsparse;

TEST_CASE("r_variation basics") {
    std::vector<double> zigzag{0.0, 1.0, 0.0, 1.0};
    CHECK(r_variation(zigzag, 1.0) == doctest::Approx(3.0));

    std::vector<double> mono{1.0, 2.0, 4.0};
    CHECK(r_variation(mono, 2.0) == doctest::Approx(3.0));

    // enumeration over all 2^4 subsequences picks the full zigzag: sqrt(3)
    CHECK(r_variation(zigzag, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r_variation_enumerated(zigzag, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    std::vector<double> single{42.0};
    CHECK(r_variation(single, 3.0) == 0.0);

    CHECK_THROWS_AS(r_variation(zigzag, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(r_variation(std::vector<double>{}, 2.0), std::invalid_argument);
}

TEST_CASE("DP equals exhaustive enumeration") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    std::uniform_int_distribution<int> len(1, 12);
    const double rs[] = {1.0, 2.0, 2.5, 3.0, 5.0};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(rng)));
        for (auto& v : a) v = unif(rng);
        for (double r : rs) {
            double dp = r_variation(a, r);
            double oracle = r_variation_enumerated(a, r);
            CHECK(std::abs(dp - oracle) <= 1e-12 * std::max(1.0, oracle));
        }
    }
}

TEST_CASE("monotone sequences: endpoint optimality") {
    std::mt19937_64 rng(3141);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> len(2, 30);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(static_cast<std::size_t>(len(rng)));
        double acc = -1.0 + 2.0 * unif(rng);
        for (auto& v : a) {
            acc += unif(rng);
            v = acc;
        }
        for (double r : {1.0, 2.0, 3.0, 7.5}) {
            double v = r_variation(a, r);
            double endpoints = std::abs(a.back() - a.front());
            CHECK(std::abs(v - endpoints) <= 1e-12 * std::max(1.0, endpoints));
        }
    }
}

TEST_CASE("truncation set validation") {
    auto dy = TruncationSet::dyadic(-2, 3);
    CHECK(dy.radii.size() == 6);
    CHECK(dy.radii.front() == 0.25);
    CHECK(dy.radii.back() == 8.0);

    CHECK_THROWS_AS(TruncationSet::general({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(TruncationSet::general({-1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TruncationSet::general({}), std::invalid_argument);

    CHECK_THROWS_AS(VariationParams(2.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(VariationParams(3.0, -1.0), std::invalid_argument);
}
