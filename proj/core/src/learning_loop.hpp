#pragma once

// Shared machinery for the optimistic learners: a backward-induction sweep
// parameterized by the per-pair backup, and the episode loop.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ucbvi/agent.hpp"
#include "ucbvi/exact.hpp"
#include "ucbvi/rng.hpp"

namespace ucbvi::detail {

struct Backup {
  double value;  // R + (P V)(x,a) + bonus, before clipping
  double bonus;
};

/// `backup(step, x, a, p_hat, next_values)` is invoked for known pairs only.
/// When `previous` is non-null its entries clip the result from above.
template <class BackupFn>
QTables backward_induction(const EmpiricalModel& model, const QTables* previous,
                           std::span<const double> rewards, BackupFn&& backup) {
  const std::size_t S = model.num_states();
  const std::size_t A = model.num_actions();
  const std::size_t H = model.horizon();
  const double cap = static_cast<double>(H);
  QTables out(S, A, H);
  out.episode = previous ? previous->episode + 1 : model.episodes_seen() + 1;
  std::vector<double> p_hat(S);
  for (std::size_t t = H; t-- > 0;) {
    const auto next = out.v.row(t + 1);
    for (std::size_t x = 0; x < S; ++x) {
      for (std::size_t a = 0; a < A; ++a) {
        if (!model.known(x, a)) {
          out.q(t, x, a) = cap;
          continue;
        }
        model.transition_row(x, a, p_hat);
        const Backup b = backup(t, x, a, std::span<const double>(p_hat), next);
        double q = std::min(cap, rewards[x * A + a] + b.value);
        if (previous) q = std::min(q, previous->q(t, x, a));
        out.q(t, x, a) = q;
        out.bonus(t, x, a) = b.bonus;
      }
      out.v(t, x) = out.q(t, x, out.greedy_action(t, x));
    }
  }
  return out;
}

/// Runs `episodes` episodes. `plan(model, previous)` produces the tables for
/// the next episode; with probability `epsilon` an action is replaced by a
/// uniform draw.
template <class PlanFn>
LearnerRun run_episodes(const TabularMDP& mdp, std::size_t episodes, std::uint64_t seed,
                        double epsilon, PlanFn&& plan, const EpisodeObserver& observer) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  Rng rng(seed);
  LearnerRun run{{}, {}, EmpiricalModel(S, A, H)};
  run.summaries.reserve(episodes);
  run.traces.reserve(episodes);
  QTables current = QTables::initial(S, A, H);
  for (std::size_t k = 1; k <= episodes; ++k) {
    current = plan(run.model, current);
    current.episode = k;
    const std::size_t start = mdp.start_state(k, rng);
    EpisodeTrace trace;
    trace.episode = k;
    trace.steps.reserve(H);
    double bonus_sum = 0.0;
    std::size_t bonus_count = 0;
    std::size_t x = start;
    for (std::size_t t = 0; t < H; ++t) {
      std::size_t a = current.greedy_action(t, x);
      if (epsilon > 0.0 && rng.uniform() < epsilon) a = rng.uniform_index(A);
      if (run.model.known(x, a)) {
        bonus_sum += current.bonus(t, x, a);
        ++bonus_count;
      }
      const std::size_t y = rng.categorical(mdp.transition_row(x, a));
      trace.steps.push_back({x, a, mdp.reward(x, a), y});
      x = y;
    }
    run.summaries.push_back({k, start, current.v(0, start),
                             bonus_count ? bonus_sum / static_cast<double>(bonus_count) : 0.0});
    if (observer) observer(current, trace);
    run.model.ingest(trace);
    run.traces.push_back(std::move(trace));
  }
  return run;
}

}  // namespace ucbvi::detail
