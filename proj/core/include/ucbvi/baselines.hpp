#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ucbvi/agent.hpp"
#include "ucbvi/mdp.hpp"

namespace ucbvi {

enum class BaselineKind { zero_bonus, epsilon_greedy, l1_optimistic };

struct BaselineConfig {
  BaselineKind kind = BaselineKind::zero_bonus;
  double epsilon = 0.1;  // epsilon_greedy
  double delta = 0.1;    // l1_optimistic

  void validate() const;
};

/// l1 confidence radius 2 sqrt(S L / n) for an empirical transition row.
double l1_radius(std::size_t num_states, double log_factor, std::uint64_t visits);

/// Row maximizing p . values over the l1 ball of `radius` around `p_hat`
/// intersected with the simplex. Puts min(radius/2, 1 - p_hat(y*)) extra
/// mass on the lowest-index argmax y* and removes it from the lowest-valued
/// states first.
std::vector<double> optimistic_transition(std::span<const double> p_hat,
                                          std::span<const double> values, double radius);

/// Same episode protocol as run_learner with a baseline planner:
///   zero_bonus      certainty equivalence: Q = min(H, R + P_hat V), unknown = H
///   epsilon_greedy  zero_bonus, but each action is uniform with prob. epsilon
///   l1_optimistic   Q = min(H, R + P~ V) with P~ from optimistic_transition
///                   at radius l1_radius(S, ln(5SAT/delta), n)
LearnerRun run_baseline(const TabularMDP& mdp, std::size_t episodes, const BaselineConfig& config,
                        std::uint64_t seed, const EpisodeObserver& observer = {});

}  // namespace ucbvi
