#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ucbvi/mdp.hpp"

namespace ucbvi::testing {

/// One state, one action, reward r.
inline TabularMDP single_state(std::size_t horizon, double reward = 1.0) {
  return TabularMDP(1, 1, horizon, {1.0}, {reward});
}

/// Identity transitions, rewards `rewards[a]` in every state.
inline TabularMDP identity_bandit(std::size_t num_states, std::vector<double> rewards,
                                  std::size_t horizon) {
  const std::size_t A = rewards.size();
  std::vector<double> P(num_states * A * num_states, 0.0);
  std::vector<double> R(num_states * A);
  for (std::size_t x = 0; x < num_states; ++x) {
    for (std::size_t a = 0; a < A; ++a) {
      P[(x * A + a) * num_states + x] = 1.0;
      R[x * A + a] = rewards[a];
    }
  }
  return TabularMDP(num_states, A, horizon, std::move(P), std::move(R));
}

/// S=3, A=1, H=2. State 0 has reward 0 and moves to state 1 (reward 1) or
/// state 2 (reward 0) with probability 0.5 each; states 1, 2 are absorbing.
inline TabularMDP bernoulli_split() {
  std::vector<double> P = {0.0, 0.5, 0.5,  //
                           0.0, 1.0, 0.0,  //
                           0.0, 0.0, 1.0};
  return TabularMDP(3, 1, 2, std::move(P), {0.0, 1.0, 0.0});
}

/// State 0: action 0 pays 1, action 1 pays 0, both lead to state 1.
/// State 1 is absorbing and pays 1 for both actions.
inline TabularMDP greedy_friendly(std::size_t horizon = 2) {
  std::vector<double> P = {0.0, 1.0, 0.0, 1.0,  //
                           0.0, 1.0, 0.0, 1.0};
  return TabularMDP(2, 2, horizon, std::move(P), {1.0, 0.0, 1.0, 1.0});
}

/// Random MDP with a few exact zeros in the rows and rewards in [0, 1].
inline TabularMDP random_mdp(std::mt19937_64& engine, std::size_t S, std::size_t A,
                             std::size_t H) {
  std::exponential_distribution<double> e(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> P(S * A * S);
  for (std::size_t row = 0; row < S * A; ++row) {
    double sum = 0.0;
    for (std::size_t y = 0; y < S; ++y) {
      double w = u(engine) < 0.2 ? 0.0 : e(engine);
      P[row * S + y] = w;
      sum += w;
    }
    if (sum == 0.0) {
      P[row * S] = 1.0;
      sum = 1.0;
    }
    for (std::size_t y = 0; y < S; ++y) P[row * S + y] /= sum;
  }
  std::vector<double> R(S * A);
  for (auto& r : R) r = u(engine);
  return TabularMDP(S, A, H, std::move(P), std::move(R));
}

inline Policy random_policy(std::mt19937_64& engine, std::size_t S, std::size_t A, std::size_t H) {
  std::uniform_int_distribution<std::size_t> pick(0, A - 1);
  std::vector<std::size_t> actions(S * H);
  for (auto& a : actions) a = pick(engine);
  return Policy(S, A, H, std::move(actions));
}

}  // namespace ucbvi::testing
