#include <benchmark/benchmark.h>

#include <vector>

#include "ucbvi/agent.hpp"
#include "ucbvi/baselines.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/exact.hpp"
#include "ucbvi/rng.hpp"

using namespace ucbvi;

namespace {

// Model filled by a uniformly random behaviour policy.
EmpiricalModel explored_model(const TabularMDP& mdp, std::size_t episodes) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  EmpiricalModel model(S, A, H);
  Rng rng(1);
  std::vector<std::size_t> actions(S * H);
  for (std::size_t k = 0; k < episodes; ++k) {
    for (auto& a : actions) a = rng.uniform_index(A);
    model.ingest(simulate_episode(mdp, Policy(S, A, H, actions), 0, rng));
  }
  return model;
}

void BM_UcbQValues(benchmark::State& state, BonusVariant variant) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const std::size_t A = 4, H = 20;
  const auto mdp = make_random(S, A, H, 1.0, 7);
  const auto model = explored_model(mdp, 2000);
  BonusConfig config;
  config.variant = variant;
  config.total_steps = 100000 * H;
  const auto previous = QTables::initial(S, A, H);
  for (auto _ : state) benchmark::DoNotOptimize(ucb_q_values(model, previous, mdp.rewards(), config));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(S * A * H));
}

void BM_OptimalValues(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  const auto mdp = make_random(S, 4, 20, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_values(mdp));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(S * 4 * 20));
}

void BM_OptimisticTransition(benchmark::State& state) {
  const auto S = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<double> p(S), v(S);
  double sum = 0.0;
  for (std::size_t y = 0; y < S; ++y) {
    p[y] = rng.gamma(1.0);
    sum += p[y];
    v[y] = rng.uniform() * 10.0;
  }
  for (auto& x : p) x /= sum;
  for (auto _ : state) benchmark::DoNotOptimize(optimistic_transition(p, v, 0.5));
}

}  // namespace

BENCHMARK_CAPTURE(BM_UcbQValues, chernoff_hoeffding, BonusVariant::chernoff_hoeffding)
    ->RangeMultiplier(4)
    ->Range(4, 64);
BENCHMARK_CAPTURE(BM_UcbQValues, bernstein_freedman, BonusVariant::bernstein_freedman)
    ->RangeMultiplier(4)
    ->Range(4, 64);
BENCHMARK(BM_OptimalValues)->RangeMultiplier(4)->Range(4, 256);
BENCHMARK(BM_OptimisticTransition)->RangeMultiplier(4)->Range(4, 256);
BENCHMARK_MAIN();
