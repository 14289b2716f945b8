#include <benchmark/benchmark.h>

#include "varsparse/curve_ops.hpp"

namespace {

using namespace varsparse;

struct Setup {
    MonomialCurve curve = MonomialCurve::standard(2);
    LatticeFunction f;
    Vec x{};
    TruncationSet I = TruncationSet::dyadic(-5, 2);
    VariationParams params{3.0, 8.0};

    Setup() {
        Box b;
        b.dim = 2;
        b.lo[0] = 0.0;
        b.hi[0] = 40.0;
        b.lo[1] = -40.0;
        b.hi[1] = 40.0;
        IVec cells{};
        cells[0] = 128;
        cells[1] = 128;
        TestFunctionParams tp;
        tp.seed = 7;
        f = make_test_function(TestFunctionKind::RandomMonotone, b, cells, tp);
        x[0] = 20.0;
        x[1] = 5.0;
    }
};

void BM_AnnulusIntegral(benchmark::State& state) {
    static Setup s;
    QuadratureConfig quad{static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(annulus_integral(s.f, nullptr, s.curve, s.x, 0.5, 1.0, quad));
}
BENCHMARK(BM_AnnulusIntegral)->Arg(16)->Arg(32)->Arg(64);

void BM_VariationOperator(benchmark::State& state) {
    static Setup s;
    for (auto _ : state)
        benchmark::DoNotOptimize(variation_operator(s.f, nullptr, s.curve, s.x, s.I, s.params));
}
BENCHMARK(BM_VariationOperator);

void BM_MaskedVariationOperator(benchmark::State& state) {
    static Setup s;
    Box inc;
    inc.dim = 2;
    inc.lo[0] = 10.0;
    inc.hi[0] = 30.0;
    inc.lo[1] = -20.0;
    inc.hi[1] = 20.0;
    Box exc;
    exc.dim = 2;
    exc.lo[0] = 18.0;
    exc.hi[0] = 22.0;
    exc.lo[1] = 2.0;
    exc.hi[1] = 8.0;
    MaskRegion mask{inc, exc};
    for (auto _ : state)
        benchmark::DoNotOptimize(variation_operator(s.f, &mask, s.curve, s.x, s.I, s.params));
}
BENCHMARK(BM_MaskedVariationOperator);

}  // namespace
