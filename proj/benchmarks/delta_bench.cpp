#include <fel/ifs.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_DeltaGarsia(benchmark::State& state) {
    const auto ifs = fel::garsia();
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(fel::delta_n(ifs, n).delta);
    state.SetComplexityN(std::int64_t{1} << n);
}
BENCHMARK(BM_DeltaGarsia)->DenseRange(8, 16, 2)->Unit(benchmark::kMillisecond)->Complexity();

void BM_DeltaBruteForce(benchmark::State& state) {
    const auto ifs = fel::garsia();
    for (auto _ : state) benchmark::DoNotOptimize(fel::delta_n_bruteforce(ifs, static_cast<int>(state.range(0))).delta);
}
BENCHMARK(BM_DeltaBruteForce)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

void BM_DimEstimate(benchmark::State& state) {
    const auto ifs = fel::cantor3();
    for (auto _ : state) benchmark::DoNotOptimize(fel::dim_estimate(ifs, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DimEstimate)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
