#pragma once

#include <cstddef>

#include "ucbvi/mdp.hpp"
#include "ucbvi/rng.hpp"

namespace ucbvi {

struct OptimalSolution {
  ValueTable values;        // V*
  ActionValueTable q;       // Q*
  Policy policy;            // pi*, lowest-index maximizer
};

/// Backward induction of the optimality Bellman operator from V*_H = 0.
OptimalSolution optimal_values(const TabularMDP& mdp);

/// Exact evaluation of a deterministic policy.
ValueTable policy_values(const TabularMDP& mdp, const Policy& policy);

/// Exact evaluation of the policy that plays `greedy` with probability
/// 1 - epsilon and a uniformly random action otherwise.
ValueTable mixed_policy_values(const TabularMDP& mdp, const Policy& greedy, double epsilon);

/// Roll out `policy` for H steps from `start`.
EpisodeTrace simulate_episode(const TabularMDP& mdp, const Policy& policy, std::size_t start,
                              Rng& rng, std::size_t episode = 1);

/// Variance of the H-step return of `policy` from `start`, via the
/// second-moment recursion M_t(x) = E[(return from t)^2].
double return_variance(const TabularMDP& mdp, const Policy& policy, std::size_t start);

/// Expected sum over the trajectory of the one-step variances
/// Var_{y ~ P(.|x_t, pi(x_t))}(V^pi_{t+1}(y)). Equal to return_variance by
/// the law of total variance; computed by an unrelated recursion.
double expected_variance_sum(const TabularMDP& mdp, const Policy& policy, std::size_t start);

}  // namespace ucbvi
