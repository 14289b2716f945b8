#include <benchmark/benchmark.h>

#include <random>

#include "varsparse/gamma_grid.hpp"

namespace {

using namespace varsparse;

GammaGrid make_grid(int d) {
    GridConfig gc;
    gc.curve = MonomialCurve::standard(d);
    gc.k_min = -10;
    gc.k_max = 10;
    return GammaGrid(gc);
}

void BM_Locate(benchmark::State& state) {
    GammaGrid grid = make_grid(static_cast<int>(state.range(0)));
    Shift j{};
    j[0] = 1;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-8.0, 8.0);
    Vec x{};
    for (int i = 0; i < grid.dim(); ++i) x[i] = unif(rng);
    for (auto _ : state) benchmark::DoNotOptimize(grid.locate(j, -3, x));
}
BENCHMARK(BM_Locate)->Arg(2)->Arg(3)->Arg(4);

void BM_ParentChain(benchmark::State& state) {
    GammaGrid grid = make_grid(2);
    Shift j{};
    j[1] = 2;
    Vec x{};
    x[0] = 1.37;
    x[1] = -0.6;
    DyadicGammaCube leaf = grid.locate(j, -8, x);
    for (auto _ : state) {
        DyadicGammaCube q = leaf;
        for (int k = -8; k < 8; ++k) q = grid.parent(q);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_ParentChain);

void BM_Relation(benchmark::State& state) {
    GammaGrid grid = make_grid(3);
    Shift j{};
    Vec x{};
    x[0] = 0.4;
    x[1] = 0.9;
    x[2] = -1.3;
    DyadicGammaCube a = grid.locate(j, -4, x);
    DyadicGammaCube b = grid.locate(j, 1, x);
    for (auto _ : state) benchmark::DoNotOptimize(grid.relation(a, b));
}
BENCHMARK(BM_Relation);

}  // namespace
