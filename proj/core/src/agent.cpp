#include "ucbvi/agent.hpp"

#include "learning_loop.hpp"

namespace ucbvi {

QTables::QTables(std::size_t num_states, std::size_t num_actions, std::size_t horizon)
    : q(num_states, num_actions, horizon), v(num_states, horizon), bonus(num_states, num_actions, horizon) {}

QTables QTables::initial(std::size_t num_states, std::size_t num_actions, std::size_t horizon) {
  QTables tables(num_states, num_actions, horizon);
  const double cap = static_cast<double>(horizon);
  tables.q = ActionValueTable(num_states, num_actions, horizon, cap);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t x = 0; x < num_states; ++x) tables.v(t, x) = cap;
  }
  return tables;
}

Policy QTables::greedy_policy() const {
  const std::size_t S = num_states();
  const std::size_t H = horizon();
  std::vector<std::size_t> actions(S * H);
  for (std::size_t t = 0; t < H; ++t) {
    for (std::size_t x = 0; x < S; ++x) actions[t * S + x] = greedy_action(t, x);
  }
  return Policy(S, num_actions(), H, std::move(actions));
}

QTables ucb_q_values(const EmpiricalModel& model, const QTables& previous,
                     std::span<const double> rewards, const BonusConfig& config) {
  const std::size_t S = model.num_states();
  const std::size_t A = model.num_actions();
  const std::size_t H = model.horizon();
  if (rewards.size() != S * A) throw std::invalid_argument("ucb_q_values: reward size mismatch");
  if (previous.num_states() != S || previous.num_actions() != A || previous.horizon() != H) {
    throw std::invalid_argument("ucb_q_values: previous tables do not match the model");
  }
  const double L = log_factor(config, S, A, H);
  std::vector<std::uint64_t> next_visits(S);

  if (config.variant == BonusVariant::chernoff_hoeffding) {
    return detail::backward_induction(
        model, &previous, rewards,
        [&](std::size_t, std::size_t x, std::size_t a, std::span<const double> p,
            std::span<const double> next) {
          double pv = 0.0;
          for (std::size_t y = 0; y < S; ++y) pv += p[y] * next[y];
          const double b = bonus_ch(H, model.count(x, a), L);
          return detail::Backup{pv + b, b};
        });
  }
  return detail::backward_induction(
      model, &previous, rewards,
      [&](std::size_t t, std::size_t x, std::size_t a, std::span<const double> p,
          std::span<const double> next) {
        for (std::size_t y = 0; y < S; ++y) next_visits[y] = model.state_step_count(t + 1, y);
        double pv = 0.0;
        for (std::size_t y = 0; y < S; ++y) pv += p[y] * next[y];
        const double b = bonus_bf(H, S, A, L, p, next, model.count(x, a), next_visits);
        return detail::Backup{pv + b, b};
      });
}

LearnerRun run_learner(const TabularMDP& mdp, std::size_t episodes, BonusConfig config,
                       std::uint64_t seed, const EpisodeObserver& observer) {
  if (config.total_steps == 0) config.total_steps = episodes * mdp.horizon();
  config.validate(mdp.horizon());
  const auto rewards = mdp.rewards();
  return detail::run_episodes(
      mdp, episodes, seed, 0.0,
      [&](const EmpiricalModel& model, const QTables& previous) {
        return ucb_q_values(model, previous, rewards, config);
      },
      observer);
}

}  // namespace ucbvi
