#include <benchmark/benchmark.h>

#include "smr/estimation.hpp"
#include "smr/sparse_geneig.hpp"
#include "smr/synth.hpp"

using namespace smr;

namespace {

Execution mode(const benchmark::State& state) { return state.range(1) == 0 ? Execution::Serial : Execution::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(1) == 0 ? "serial" : "parallel"); }

void BM_GreedySweep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pair = synth::random_spd_pair(n, 1);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_search({pair.a, pair.b, n, Sense::Maximize}, mode(state)));
    label(state);
}

void BM_ExhaustiveOracle(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pair = synth::random_spd_pair(n, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(exhaustive_oracle({pair.a, pair.b, n / 2, Sense::Maximize}, mode(state)));
    label(state);
}

void BM_LassoTransition(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto pair = make_lagged_pair(synth::var_panel(n, 2000, 1, 0.9, 3).panel, true);
    const double gamma = 0.5 * lasso_penalty_for_sparsity(pair, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(lasso_transition(pair, gamma, mode(state)));
    label(state);
}

void BM_SdpPath(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const TimePanel panel = synth::var_panel(n, 1000, 1, 0.8, 4).panel;
    PipelineOptions options;
    options.method = SparseMethod::Sdp;
    options.sdp.max_iterations = 2000;
    options.exec = mode(state);
    for (auto _ : state) benchmark::DoNotOptimize(sparse_path(panel, n, options));
    label(state);
}

}  // namespace

BENCHMARK(BM_GreedySweep)->ArgsProduct({{25, 50}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveOracle)->ArgsProduct({{12, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LassoTransition)->ArgsProduct({{20, 40}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SdpPath)->ArgsProduct({{6}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
