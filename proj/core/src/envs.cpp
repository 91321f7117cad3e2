#include "ucbvi/envs.hpp"

#include <stdexcept>
#include <vector>

#include "ucbvi/rng.hpp"

namespace ucbvi {

EnvKind parse_env_kind(std::string_view name) {
  if (name == "chain") return EnvKind::chain;
  if (name == "random" || name == "random_dirichlet") return EnvKind::random_dirichlet;
  if (name == "hard-bandit" || name == "hard_bandit") return EnvKind::hard_bandit;
  if (name == "file" || name == "from_file") return EnvKind::from_file;
  throw std::invalid_argument("unknown environment '" + std::string(name) + "'");
}

std::string_view to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::chain: return "chain";
    case EnvKind::random_dirichlet: return "random";
    case EnvKind::hard_bandit: return "hard-bandit";
    case EnvKind::from_file: return "file";
  }
  return "?";
}

TabularMDP make_chain(std::size_t num_states, std::size_t horizon, double p_succ) {
  if (num_states < 2) throw std::invalid_argument("chain: needs at least 2 states");
  if (!(p_succ > 0.0 && p_succ <= 1.0)) throw std::invalid_argument("chain: p_succ must be in (0, 1]");
  const std::size_t S = num_states;
  constexpr std::size_t A = 2;
  std::vector<double> p(S * A * S, 0.0);
  std::vector<double> r(S * A, 0.0);
  auto at = [&](std::size_t x, std::size_t a, std::size_t y) -> double& {
    return p[(x * A + a) * S + y];
  };
  for (std::size_t x = 0; x < S; ++x) {
    at(x, 0, x == 0 ? 0 : x - 1) = 1.0;
    if (x + 1 < S) {
      at(x, 1, x + 1) = p_succ;
      at(x, 1, x) += 1.0 - p_succ;
    } else {
      at(x, 1, x) = 1.0;
    }
  }
  r[(S - 1) * A + 1] = 1.0;
  return TabularMDP(S, A, horizon, std::move(p), std::move(r));
}

TabularMDP make_random(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       double alpha, std::uint64_t seed) {
  if (!(alpha > 0.0)) throw std::invalid_argument("random: alpha must be positive");
  const std::size_t S = num_states;
  const std::size_t A = num_actions;
  Rng rng(seed);
  std::vector<double> p(S * A * S);
  std::vector<double> r(S * A);
  for (std::size_t row = 0; row < S * A; ++row) {
    double total = 0.0;
    for (std::size_t y = 0; y < S; ++y) {
      p[row * S + y] = rng.gamma(alpha);
      total += p[row * S + y];
    }
    if (total <= 0.0) {
      // every gamma draw underflowed (tiny alpha); fall back to a point mass
      p[row * S] = 1.0;
      total = 1.0;
    }
    for (std::size_t y = 0; y < S; ++y) p[row * S + y] /= total;
  }
  for (double& reward : r) reward = rng.uniform();
  return TabularMDP(S, A, horizon, std::move(p), std::move(r));
}

TabularMDP make_hard_bandit(std::size_t num_actions, std::size_t horizon, double eps) {
  if (num_actions < 2) throw std::invalid_argument("hard-bandit: needs at least 2 actions");
  if (horizon < 2) throw std::invalid_argument("hard-bandit: needs H >= 2");
  if (!(eps >= 0.0 && eps < 0.5)) throw std::invalid_argument("hard-bandit: eps must be in [0, 0.5)");
  constexpr std::size_t S = 2;
  const std::size_t A = num_actions;
  std::vector<double> p(S * A * S, 0.0);
  std::vector<double> r(S * A, 0.0);
  for (std::size_t a = 0; a < A; ++a) {
    const double up = a == 0 ? 0.5 + eps : 0.5;
    p[(0 * A + a) * S + 1] = up;
    p[(0 * A + a) * S + 0] = 1.0 - up;
    p[(1 * A + a) * S + 1] = 1.0;
    r[1 * A + a] = 1.0;
  }
  return TabularMDP(S, A, horizon, std::move(p), std::move(r));
}

TabularMDP make_env(const EnvSpec& spec) {
  switch (spec.kind) {
    case EnvKind::chain:
      if (spec.num_actions != 2) throw std::invalid_argument("chain: A must be 2");
      return make_chain(spec.num_states, spec.horizon, spec.p_succ);
    case EnvKind::random_dirichlet:
      return make_random(spec.num_states, spec.num_actions, spec.horizon, spec.alpha, spec.seed);
    case EnvKind::hard_bandit:
      return make_hard_bandit(spec.num_actions, spec.horizon, spec.eps);
    case EnvKind::from_file:
      if (spec.path.empty()) throw std::invalid_argument("file environment needs a path");
      return load_mdp(spec.path);
  }
  throw std::invalid_argument("unknown environment kind");
}

}  // namespace ucbvi
