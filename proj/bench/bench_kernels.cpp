// Serial reference kernels against their OpenMP counterparts on the sequence
// of y^2 + y = x^3 - x, P = (0, 0).

#include "edsfrey/eds_checks.hpp"

#include <benchmark/benchmark.h>

using namespace edsfrey;

namespace {

const std::vector<Integer>& terms(unsigned long n) {
    static std::map<unsigned long, std::vector<Integer>> memo;
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    EDSequence seq(WeierstrassModel::create({0, 0, 1, -1, 0}), RationalPoint::affine(0, 0));
    return memo[n] = seq.denominators(n);
}

void BM_StrongDivisibilitySerial(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::strong_divisibility(B, st.range(0)));
}

void BM_StrongDivisibilityOmp(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::omp::strong_divisibility(B, st.range(0)));
}

void BM_ValuationGridSerial(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::valuation_grid(B, st.range(0), true));
}

void BM_ValuationGridOmp(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::omp::valuation_grid(B, st.range(0), true));
}

void BM_PrimitiveCofactorsSerial(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::serial::primitive_cofactors(B, 1, st.range(0)));
}

void BM_PrimitiveCofactorsOmp(benchmark::State& st) {
    const auto& B = terms(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(kernels::omp::primitive_cofactors(B, 1, st.range(0)));
}

}  // namespace

BENCHMARK(BM_StrongDivisibilitySerial)->Arg(40)->Arg(80);
BENCHMARK(BM_StrongDivisibilityOmp)->Arg(40)->Arg(80);
BENCHMARK(BM_ValuationGridSerial)->Arg(60)->Arg(120);
BENCHMARK(BM_ValuationGridOmp)->Arg(60)->Arg(120);
BENCHMARK(BM_PrimitiveCofactorsSerial)->Arg(40)->Arg(80);
BENCHMARK(BM_PrimitiveCofactorsOmp)->Arg(40)->Arg(80);

BENCHMARK_MAIN();
