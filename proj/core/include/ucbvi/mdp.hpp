#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ucbvi {

class Rng;

/// How the environment picks the first state x_{k,1} of episode k.
struct StartRule {
  enum class Kind { fixed, distribution, sequence };

  Kind kind = Kind::fixed;
  std::size_t state = 0;
  std::vector<double> probs;
  std::vector<std::size_t> states;

  static StartRule fixed(std::size_t state);
  static StartRule distribution(std::vector<double> probs);
  /// Episode k (1-based) starts from states[(k - 1) % states.size()].
  static StartRule sequence(std::vector<std::size_t> states);
};

/// Finite-horizon MDP with known deterministic rewards in [0, 1].
///
/// Steps are 0-based throughout the library: step t in [0, H) is the
/// (t+1)-th decision of an episode. Transition rows are stored densely as
/// P[state][action][next_state].
class TabularMDP {
 public:
  /// Rows within 1e-9 of the simplex are renormalized; anything else throws
  /// std::invalid_argument, as do rewards outside [0, 1] and zero sizes.
  TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
             std::vector<double> transitions, std::vector<double> rewards,
             StartRule start = StartRule::fixed(0));

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t horizon() const noexcept { return horizon_; }

  std::span<const double> transition_row(std::size_t x, std::size_t a) const noexcept {
    return {transitions_.data() + (x * num_actions_ + a) * num_states_, num_states_};
  }
  double transition(std::size_t x, std::size_t a, std::size_t y) const noexcept {
    return transitions_[(x * num_actions_ + a) * num_states_ + y];
  }
  double reward(std::size_t x, std::size_t a) const noexcept {
    return rewards_[x * num_actions_ + a];
  }
  /// Reward matrix, row-major (state, action).
  std::span<const double> rewards() const noexcept { return rewards_; }
  std::span<const double> transitions() const noexcept { return transitions_; }

  const StartRule& start_rule() const noexcept { return start_; }

  /// First state of episode `episode` (1-based). Draws from `rng` only for
  /// the distribution rule.
  std::size_t start_state(std::size_t episode, Rng& rng) const;

  /// True when every transition row is a point mass.
  bool is_deterministic() const noexcept;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
  StartRule start_;
};

/// Deterministic Markov policy, indexed (step, state) -> action.
class Policy {
 public:
  Policy(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
         std::vector<std::size_t> actions);

  /// Policy that plays `action` everywhere.
  static Policy constant(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                         std::size_t action = 0);

  std::size_t action(std::size_t step, std::size_t x) const noexcept {
    return actions_[step * num_states_ + x];
  }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::span<const std::size_t> actions() const noexcept { return actions_; }

  bool operator==(const Policy&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::vector<std::size_t> actions_;
};

/// Values for steps 0..H; row H is the terminal row and is zero.
class ValueTable {
 public:
  ValueTable(std::size_t num_states, std::size_t horizon)
      : num_states_(num_states), horizon_(horizon), values_((horizon + 1) * num_states, 0.0) {}

  double operator()(std::size_t step, std::size_t x) const noexcept {
    return values_[step * num_states_ + x];
  }
  double& operator()(std::size_t step, std::size_t x) noexcept {
    return values_[step * num_states_ + x];
  }
  std::span<const double> row(std::size_t step) const noexcept {
    return {values_.data() + step * num_states_, num_states_};
  }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t horizon() const noexcept { return horizon_; }

 private:
  std::size_t num_states_;
  std::size_t horizon_;
  std::vector<double> values_;
};

/// Action values for steps 0..H-1, indexed (step, state, action).
class ActionValueTable {
 public:
  ActionValueTable(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                   double fill = 0.0)
      : num_states_(num_states),
        num_actions_(num_actions),
        horizon_(horizon),
        values_(horizon * num_states * num_actions, fill) {}

  double operator()(std::size_t step, std::size_t x, std::size_t a) const noexcept {
    return values_[(step * num_states_ + x) * num_actions_ + a];
  }
  double& operator()(std::size_t step, std::size_t x, std::size_t a) noexcept {
    return values_[(step * num_states_ + x) * num_actions_ + a];
  }
  std::span<const double> row(std::size_t step, std::size_t x) const noexcept {
    return {values_.data() + (step * num_states_ + x) * num_actions_, num_actions_};
  }
  std::span<const double> data() const noexcept { return values_; }
  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t horizon() const noexcept { return horizon_; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::vector<double> values_;
};

/// Lowest index attaining the maximum of `row`.
std::size_t argmax_lowest(std::span<const double> row) noexcept;

struct Transition {
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;

  bool operator==(const Transition&) const = default;
};

/// One H-step interaction, episode index k is 1-based.
struct EpisodeTrace {
  std::size_t episode = 1;
  std::vector<Transition> steps;

  bool operator==(const EpisodeTrace&) const = default;
};

/// JSON document {"S","A","H","P"[x][a][y],"R"[x][a],"start"}.
std::string to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(std::string_view text);
TabularMDP load_mdp(const std::string& path);
void save_mdp(const TabularMDP& mdp, const std::string& path);

}  // namespace ucbvi
