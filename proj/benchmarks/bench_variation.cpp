#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "varsparse/curve_ops.hpp"

namespace {

std::vector<double> random_sequence(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> a(n);
    for (auto& v : a) v = unif(rng);
    return a;
}

void BM_RVariationDP(benchmark::State& state) {
    auto a = random_sequence(static_cast<std::size_t>(state.range(0)), 42);
    for (auto _ : state) benchmark::DoNotOptimize(varsparse::r_variation(a, 3.0));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RVariationDP)->RangeMultiplier(2)->Range(8, 1024)->Complexity(benchmark::oNSquared);

void BM_RVariationEnumerated(benchmark::State& state) {
    auto a = random_sequence(static_cast<std::size_t>(state.range(0)), 43);
    for (auto _ : state) benchmark::DoNotOptimize(varsparse::r_variation_enumerated(a, 3.0));
}
BENCHMARK(BM_RVariationEnumerated)->DenseRange(8, 16, 4);

}  // namespace
