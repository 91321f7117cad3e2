#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace ucbvi {

enum class BonusVariant { chernoff_hoeffding, bernstein_freedman };

/// Which log factor to use: ln(5SAT/delta) as the bonus routines state it,
/// or ln(5HSAT/delta) as in the regret bounds.
enum class LogConvention { algorithm, theorem };

struct BonusConfig {
  double delta = 0.1;
  /// T = K*H. Zero means "fill in from the run length" when passed to a
  /// learner.
  std::uint64_t total_steps = 0;
  BonusVariant variant = BonusVariant::bernstein_freedman;
  LogConvention log_convention = LogConvention::algorithm;

  /// Throws std::invalid_argument unless 0 < delta < 1 and T >= H.
  void validate(std::size_t horizon) const;
};

/// L = ln(5 S A T / delta), or ln(5 H S A T / delta) under the theorem
/// convention.
double log_factor(const BonusConfig& config, std::size_t num_states, std::size_t num_actions,
                  std::size_t horizon);

/// Var_{Y ~ probs}(values(Y)) = E[V^2] - (E V)^2, clamped at zero.
double empirical_variance(std::span<const double> probs, std::span<const double> values) noexcept;

/// 7 H L / sqrt(N). Throws std::domain_error for N = 0.
double bonus_ch(std::size_t horizon, std::uint64_t visits, double log_factor);

struct BernsteinTerms {
  double variance;    // sqrt(8 L Var / N)
  double range;       // 14 H L / (3 N)
  double correction;  // sqrt(8 sum_y p(y) min(c / N'(y), H^2) / N)

  double total() const noexcept { return variance + range + correction; }
};

/// The three terms of the Bernstein-Freedman bonus for one pair.
/// `next_values` holds V_{t+1}(y) and `next_state_visits` the state visit
/// counts N'(y) at step t+1; a zero count makes the min take the H^2 cap.
BernsteinTerms bonus_bf_terms(std::size_t horizon, std::size_t num_states,
                              std::size_t num_actions, double log_factor,
                              std::span<const double> probs, std::span<const double> next_values,
                              std::uint64_t visits,
                              std::span<const std::uint64_t> next_state_visits);

double bonus_bf(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                double log_factor, std::span<const double> probs,
                std::span<const double> next_values, std::uint64_t visits,
                std::span<const std::uint64_t> next_state_visits);

}  // namespace ucbvi
