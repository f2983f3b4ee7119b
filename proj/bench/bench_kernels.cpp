// Serial reference vs OpenMP paths of the two parallel kernels: one Bellman
// sweep over the truncated age chain, and a lambda sweep of simulations.

#include <benchmark/benchmark.h>

#include <vector>

#include "jamopt/execution.hpp"
#include "jamopt/mdp.hpp"
#include "jamopt/sweep.hpp"

using namespace jamopt;

namespace {

void bellman(benchmark::State& state, Execution execution) {
  const auto count = static_cast<std::size_t>(state.range(0));
  const SystemParams params = validate_params(0.1, 0.5, 0.5, 4.0);
  const IncrementKernel kernel = make_kernel(params, Metric::AoI);
  std::vector<double> values(count);
  for (std::size_t s = 0; s < count; ++s) values[s] = 0.5 * static_cast<double>(s);
  std::vector<double> next(count);
  std::vector<double> gaps(count);
  for (auto _ : state) {
    bellman_sweep(execution, kernel, params.lambda, values, next, gaps);
    benchmark::DoNotOptimize(next.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count));
  state.counters["threads"] = execution == Execution::Parallel ? max_threads() : 1;
}

void rvi(benchmark::State& state, Execution execution) {
  RviOptions options;
  options.state_cap = state.range(0);
  options.execution = execution;
  const SystemParams params = validate_params(0.1, 0.5, 0.5, 4.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvi_solve(params, Metric::AoI, options).gain);
  }
}

void sweep(benchmark::State& state, Execution execution) {
  SweepSpec spec;
  spec.lambda_end = 5.0;
  SimSettings sim;
  sim.slots = static_cast<std::uint64_t>(state.range(0));
  sim.burn_in = sim.slots / 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sweep(spec, sim, execution).size());
  }
  state.counters["threads"] = execution == Execution::Parallel ? max_threads() : 1;
}

}  // namespace

BENCHMARK_CAPTURE(bellman, serial, Execution::Serial)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK_CAPTURE(bellman, parallel, Execution::Parallel)->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK_CAPTURE(rvi, serial, Execution::Serial)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(rvi, parallel, Execution::Parallel)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, serial, Execution::Serial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(sweep, parallel, Execution::Parallel)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
