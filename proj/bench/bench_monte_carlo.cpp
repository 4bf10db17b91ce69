// Serial reference vs OpenMP Monte Carlo on the default synthetic instance,
// plus the two benchmark LP solves.
//
//   ./bench_monte_carlo --benchmark_counters_tabular=true

#include <benchmark/benchmark.h>

#include "fairmatch/data.hpp"
#include "fairmatch/lp.hpp"
#include "fairmatch/policies.hpp"
#include "fairmatch/simplex.hpp"
#include "fairmatch/simulator.hpp"

using namespace fairmatch;

namespace {

struct Setup {
  Instance inst = generate_synthetic({}, 2020);
  Benchmarks bench = solve_benchmarks(inst);
  NonAdaptivePolicy nadap{make_nadap(bench.x_star, bench.y_star, 0.5, 0.5, inst)};
};

const Setup& setup() {
  static const Setup s;
  return s;
}

constexpr std::size_t kEpisodes = 2000;

void BM_MonteCarloSerial(benchmark::State& state) {
  const Setup& s = setup();
  for (auto _ : state)
    benchmark::DoNotOptimize(run_monte_carlo_serial(s.inst, s.nadap, kEpisodes, 1).profit_mean);
  state.SetItemsProcessed(state.iterations() * kEpisodes);
}
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MonteCarloParallel(benchmark::State& state) {
  const Setup& s = setup();
  MonteCarloOptions mc;
  mc.threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_monte_carlo(s.inst, s.nadap, kEpisodes, 1, mc).profit_mean);
  state.SetItemsProcessed(state.iterations() * kEpisodes);
}
BENCHMARK(BM_MonteCarloParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ProfitLp(benchmark::State& state) {
  const LpProblem p = build_profit_lp(setup().inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p).objective_value);
}
BENCHMARK(BM_ProfitLp)->Unit(benchmark::kMillisecond);

void BM_FairnessLp(benchmark::State& state) {
  const LpProblem p = build_fairness_lp(setup().inst);
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(p).objective_value);
}
BENCHMARK(BM_FairnessLp)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
