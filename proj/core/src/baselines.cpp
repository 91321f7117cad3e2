#include "ucbvi/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "learning_loop.hpp"

namespace ucbvi {

void BaselineConfig::validate() const {
  if (kind == BaselineKind::epsilon_greedy && !(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (kind == BaselineKind::l1_optimistic && !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
}

double l1_radius(std::size_t num_states, double log_factor, std::uint64_t visits) {
  if (visits == 0) throw std::domain_error("l1_radius: pair has no visits");
  return 2.0 * std::sqrt(static_cast<double>(num_states) * log_factor /
                         static_cast<double>(visits));
}

std::vector<double> optimistic_transition(std::span<const double> p_hat,
                                          std::span<const double> values, double radius) {
  if (p_hat.size() != values.size() || p_hat.empty()) {
    throw std::invalid_argument("optimistic_transition: size mismatch");
  }
  if (radius < 0.0) throw std::invalid_argument("optimistic_transition: negative radius");
  std::vector<double> out(p_hat.begin(), p_hat.end());
  const std::size_t best = argmax_lowest(values);
  double budget = std::min(radius / 2.0, 1.0 - out[best]);
  if (budget <= 0.0) return out;
  out[best] += budget;

  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  for (std::size_t y : order) {
    if (budget <= 0.0) break;
    if (y == best) continue;
    const double take = std::min(budget, out[y]);
    out[y] -= take;
    budget -= take;
  }
  return out;
}

LearnerRun run_baseline(const TabularMDP& mdp, std::size_t episodes, const BaselineConfig& config,
                        std::uint64_t seed, const EpisodeObserver& observer) {
  config.validate();
  const auto rewards = mdp.rewards();
  const std::size_t S = mdp.num_states();

  auto zero_bonus = [&](const EmpiricalModel& model, const QTables&) {
    return detail::backward_induction(
        model, nullptr, rewards,
        [&](std::size_t, std::size_t, std::size_t, std::span<const double> p,
            std::span<const double> next) {
          double pv = 0.0;
          for (std::size_t y = 0; y < S; ++y) pv += p[y] * next[y];
          return detail::Backup{pv, 0.0};
        });
  };

  switch (config.kind) {
    case BaselineKind::zero_bonus:
      return detail::run_episodes(mdp, episodes, seed, 0.0, zero_bonus, observer);
    case BaselineKind::epsilon_greedy:
      return detail::run_episodes(mdp, episodes, seed, config.epsilon, zero_bonus, observer);
    case BaselineKind::l1_optimistic: {
      BonusConfig log_config;
      log_config.delta = config.delta;
      log_config.total_steps = episodes * mdp.horizon();
      const double L = log_factor(log_config, S, mdp.num_actions(), mdp.horizon());
      auto plan = [&](const EmpiricalModel& model, const QTables&) {
        return detail::backward_induction(
            model, nullptr, rewards,
            [&](std::size_t, std::size_t x, std::size_t a, std::span<const double> p,
                std::span<const double> next) {
              const auto tilted = optimistic_transition(p, next, l1_radius(S, L, model.count(x, a)));
              double pv = 0.0;
              double base = 0.0;
              for (std::size_t y = 0; y < S; ++y) {
                pv += tilted[y] * next[y];
                base += p[y] * next[y];
              }
              return detail::Backup{pv, pv - base};
            });
      };
      return detail::run_episodes(mdp, episodes, seed, 0.0, plan, observer);
    }
  }
  throw std::invalid_argument("run_baseline: unknown baseline kind");
}

}  // namespace ucbvi
