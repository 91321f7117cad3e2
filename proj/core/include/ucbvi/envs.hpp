#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "ucbvi/mdp.hpp"

namespace ucbvi {

enum class EnvKind { chain, random_dirichlet, hard_bandit, from_file };

EnvKind parse_env_kind(std::string_view name);
std::string_view to_string(EnvKind kind);

struct EnvSpec {
  EnvKind kind = EnvKind::chain;
  std::size_t num_states = 5;
  std::size_t num_actions = 2;
  std::size_t horizon = 5;
  double p_succ = 0.8;
  double alpha = 1.0;
  double eps = 0.1;
  std::string path;
  std::uint64_t seed = 0;
};

/// Chain of S states. Action 0 ("left") moves to max(x-1, 0); action 1
/// ("right") moves to x+1 with probability p_succ and stays otherwise, and
/// the last state stays put. Reward 1 only for (S-1, right). Starts at 0.
TabularMDP make_chain(std::size_t num_states, std::size_t horizon, double p_succ);

/// Rows ~ Dirichlet(alpha * 1), rewards ~ U[0, 1], start at 0.
TabularMDP make_random(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       double alpha, std::uint64_t seed);

/// Two states. From state 0 action 0 reaches the absorbing, rewarding
/// state 1 with probability 0.5 + eps, every other action with 0.5.
TabularMDP make_hard_bandit(std::size_t num_actions, std::size_t horizon, double eps);

/// Dispatch on spec.kind. Chain requires num_actions == 2; hard_bandit
/// ignores num_states; from_file ignores every size field.
TabularMDP make_env(const EnvSpec& spec);

}  // namespace ucbvi
