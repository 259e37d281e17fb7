#include <benchmark/benchmark.h>
#include <omp.h>

#include "occtime/mc_sim.hpp"

using namespace occtime;

namespace {

const FbpSolution& solution() {
    static const FbpSolution s = solve_fbp(canonical_params());
    return s;
}

SimConfig config(std::int64_t paths) {
    SimConfig c;
    c.w0 = -1.0;
    c.n_paths = paths;
    c.seed = 17;
    return c;
}

void BM_simulate_serial(benchmark::State& state) {
    const Strategy pi = optimal_strategy(solution());
    const SimConfig c = config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_serial(solution(), pi, c).mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_simulate_parallel(benchmark::State& state) {
    const Strategy pi = optimal_strategy(solution());
    const SimConfig c = config(state.range(0));
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(solution(), pi, c).mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = static_cast<double>(state.range(1));
}

}  // namespace

BENCHMARK(BM_simulate_serial)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_simulate_parallel)
    ->ArgsProduct({{4096}, {1, 2, 4, 8}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
