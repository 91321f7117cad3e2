#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ucbvi/bonus.hpp"
#include "ucbvi/empirical_model.hpp"
#include "ucbvi/mdp.hpp"

namespace ucbvi {

/// Optimistic action values Q_{k,t} for one episode, with V_{k,t} = max_a Q
/// and the bonus that entered each known pair's backup.
struct QTables {
  ActionValueTable q;
  ValueTable v;
  ActionValueTable bonus;
  std::size_t episode = 0;

  QTables(std::size_t num_states, std::size_t num_actions, std::size_t horizon);

  /// Q_0 = H everywhere, so the first clipped update is well defined.
  static QTables initial(std::size_t num_states, std::size_t num_actions, std::size_t horizon);

  std::size_t num_states() const noexcept { return q.num_states(); }
  std::size_t num_actions() const noexcept { return q.num_actions(); }
  std::size_t horizon() const noexcept { return q.horizon(); }

  /// Lowest-index maximizer of Q_{k,step}(x, .).
  std::size_t greedy_action(std::size_t step, std::size_t x) const noexcept {
    return argmax_lowest(q.row(step, x));
  }
  Policy greedy_policy() const;
};

/// One pass of optimistic backward induction over the data seen so far.
/// Known pairs get min(Q_{k-1}, H, R + P_hat V_{t+1} + b); unknown pairs get
/// H. The bonus at step t reads V_{t+1} from the same sweep.
/// `config.total_steps` must already be set.
QTables ucb_q_values(const EmpiricalModel& model, const QTables& previous,
                     std::span<const double> rewards, const BonusConfig& config);

struct EpisodeSummary {
  std::size_t episode;
  std::size_t start_state;
  double start_value;         // V_{k,1}(x_{k,1})
  double mean_visited_bonus;  // mean bonus over known visited pairs, 0 if none
};

struct LearnerRun {
  std::vector<EpisodeSummary> summaries;
  std::vector<EpisodeTrace> traces;
  EmpiricalModel model;
};

/// Called once per episode with the tables used to act and the resulting
/// trace, before the trace is ingested.
using EpisodeObserver = std::function<void(const QTables&, const EpisodeTrace&)>;

/// The episode loop: plan from the data so far, act greedily for H steps on
/// the true MDP, ingest the trace. Fully determined by `seed`.
LearnerRun run_learner(const TabularMDP& mdp, std::size_t episodes, BonusConfig config,
                       std::uint64_t seed, const EpisodeObserver& observer = {});

}  // namespace ucbvi
