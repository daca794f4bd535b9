// Serial reference vs OpenMP pairwise k_sd on random directed graphs.

#include <random>

#include <benchmark/benchmark.h>

#include "inp2cpa/resilience.hpp"
#include "support/generators.hpp"

namespace res = inp2cpa::resilience;

namespace {

inp2cpa::LogicalGraph graph_of(int n) {
    std::mt19937_64 rng(static_cast<unsigned>(n));
    return testgen::random_graph(rng, n, 0.3);
}

void run(benchmark::State& state, res::Execution execution) {
    const auto g = graph_of(static_cast<int>(state.range(0)));
    const res::DiversityParams params;
    for (auto _ : state) benchmark::DoNotOptimize(res::pairwise_k_sd(g, params, execution));
    state.counters["pairs"] = static_cast<double>(state.range(0) * (state.range(0) - 1));
}

void BM_pairwise_serial(benchmark::State& state) { run(state, res::Execution::serial); }
void BM_pairwise_parallel(benchmark::State& state) { run(state, res::Execution::parallel); }

}  // namespace

BENCHMARK(BM_pairwise_serial)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_pairwise_parallel)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
