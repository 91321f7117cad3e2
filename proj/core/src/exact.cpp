#include "ucbvi/exact.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ucbvi {

namespace {

double expect(std::span<const double> probs, std::span<const double> values) noexcept {
  double sum = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) sum += probs[y] * values[y];
  return sum;
}

void check_policy(const TabularMDP& mdp, const Policy& policy) {
  if (policy.num_states() != mdp.num_states() || policy.num_actions() != mdp.num_actions() ||
      policy.horizon() != mdp.horizon()) {
    throw std::invalid_argument("policy dimensions do not match the MDP");
  }
}

}  // namespace

OptimalSolution optimal_values(const TabularMDP& mdp) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  ValueTable v(S, H);
  ActionValueTable q(S, A, H);
  std::vector<std::size_t> actions(H * S, 0);
  for (std::size_t t = H; t-- > 0;) {
    const auto next = v.row(t + 1);
    for (std::size_t x = 0; x < S; ++x) {
      for (std::size_t a = 0; a < A; ++a) {
        q(t, x, a) = mdp.reward(x, a) + expect(mdp.transition_row(x, a), next);
      }
      const std::size_t best = argmax_lowest(q.row(t, x));
      actions[t * S + x] = best;
      v(t, x) = q(t, x, best);
    }
  }
  return {std::move(v), std::move(q), Policy(S, A, H, std::move(actions))};
}

ValueTable policy_values(const TabularMDP& mdp, const Policy& policy) {
  check_policy(mdp, policy);
  const std::size_t S = mdp.num_states();
  const std::size_t H = mdp.horizon();
  ValueTable v(S, H);
  for (std::size_t t = H; t-- > 0;) {
    const auto next = v.row(t + 1);
    for (std::size_t x = 0; x < S; ++x) {
      const std::size_t a = policy.action(t, x);
      v(t, x) = mdp.reward(x, a) + expect(mdp.transition_row(x, a), next);
    }
  }
  return v;
}

ValueTable mixed_policy_values(const TabularMDP& mdp, const Policy& greedy, double epsilon) {
  check_policy(mdp, greedy);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  ValueTable v(S, H);
  for (std::size_t t = H; t-- > 0;) {
    const auto next = v.row(t + 1);
    for (std::size_t x = 0; x < S; ++x) {
      double uniform = 0.0;
      double chosen = 0.0;
      for (std::size_t a = 0; a < A; ++a) {
        const double backup = mdp.reward(x, a) + expect(mdp.transition_row(x, a), next);
        uniform += backup;
        if (a == greedy.action(t, x)) chosen = backup;
      }
      v(t, x) = (1.0 - epsilon) * chosen + epsilon * uniform / static_cast<double>(A);
    }
  }
  return v;
}

EpisodeTrace simulate_episode(const TabularMDP& mdp, const Policy& policy, std::size_t start,
                              Rng& rng, std::size_t episode) {
  check_policy(mdp, policy);
  if (start >= mdp.num_states()) throw std::out_of_range("start state out of range");
  EpisodeTrace trace;
  trace.episode = episode;
  trace.steps.reserve(mdp.horizon());
  std::size_t x = start;
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    const std::size_t a = policy.action(t, x);
    const std::size_t y = rng.categorical(mdp.transition_row(x, a));
    trace.steps.push_back({x, a, mdp.reward(x, a), y});
    x = y;
  }
  return trace;
}

double return_variance(const TabularMDP& mdp, const Policy& policy, std::size_t start) {
  check_policy(mdp, policy);
  const std::size_t S = mdp.num_states();
  const std::size_t H = mdp.horizon();
  const ValueTable v = policy_values(mdp, policy);
  // second moments of the return-to-go
  ValueTable m(S, H);
  for (std::size_t t = H; t-- > 0;) {
    for (std::size_t x = 0; x < S; ++x) {
      const std::size_t a = policy.action(t, x);
      const double r = mdp.reward(x, a);
      const auto row = mdp.transition_row(x, a);
      m(t, x) = r * r + 2.0 * r * expect(row, v.row(t + 1)) + expect(row, m.row(t + 1));
    }
  }
  return std::max(0.0, m(0, start) - v(0, start) * v(0, start));
}

double expected_variance_sum(const TabularMDP& mdp, const Policy& policy, std::size_t start) {
  check_policy(mdp, policy);
  const std::size_t S = mdp.num_states();
  const std::size_t H = mdp.horizon();
  const ValueTable v = policy_values(mdp, policy);
  ValueTable w(S, H);
  for (std::size_t t = H; t-- > 0;) {
    const auto next = v.row(t + 1);
    for (std::size_t x = 0; x < S; ++x) {
      const auto row = mdp.transition_row(x, policy.action(t, x));
      const double mean = expect(row, next);
      double var = 0.0;
      for (std::size_t y = 0; y < S; ++y) {
        const double d = next[y] - mean;
        var += row[y] * d * d;
      }
      w(t, x) = var + expect(row, w.row(t + 1));
    }
  }
  return w(0, start);
}

}  // namespace ucbvi
