#include "ucbvi/bonus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ucbvi {

void BonusConfig::validate(std::size_t horizon) const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (total_steps < horizon) throw std::invalid_argument("total steps T must be at least H");
}

double log_factor(const BonusConfig& config, std::size_t num_states, std::size_t num_actions,
                  std::size_t horizon) {
  config.validate(horizon);
  double inner = 5.0 * static_cast<double>(num_states) * static_cast<double>(num_actions) *
                 static_cast<double>(config.total_steps) / config.delta;
  if (config.log_convention == LogConvention::theorem) inner *= static_cast<double>(horizon);
  return std::log(inner);
}

double empirical_variance(std::span<const double> probs, std::span<const double> values) noexcept {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    mean += probs[y] * values[y];
    second += probs[y] * values[y] * values[y];
  }
  return std::max(0.0, second - mean * mean);
}

double bonus_ch(std::size_t horizon, std::uint64_t visits, double log_factor) {
  if (visits == 0) throw std::domain_error("bonus_ch: pair has no visits");
  return 7.0 * static_cast<double>(horizon) * log_factor /
         std::sqrt(static_cast<double>(visits));
}

BernsteinTerms bonus_bf_terms(std::size_t horizon, std::size_t num_states,
                              std::size_t num_actions, double log_factor,
                              std::span<const double> probs, std::span<const double> next_values,
                              std::uint64_t visits,
                              std::span<const std::uint64_t> next_state_visits) {
  if (visits == 0) throw std::domain_error("bonus_bf: pair has no visits");
  const double n = static_cast<double>(visits);
  const double H = static_cast<double>(horizon);
  const double L = log_factor;
  const double cap = H * H;
  const double scale = 100.0 * 100.0 * H * H * H * static_cast<double>(num_states) *
                       static_cast<double>(num_states) * static_cast<double>(num_actions) * L *
                       L;

  double weighted = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (probs[y] == 0.0) continue;
    const double term =
        next_state_visits[y] == 0 ? cap
                                  : std::min(scale / static_cast<double>(next_state_visits[y]), cap);
    weighted += probs[y] * term;
  }

  BernsteinTerms terms{};
  terms.variance = std::sqrt(8.0 * L * empirical_variance(probs, next_values) / n);
  terms.range = 14.0 * H * L / (3.0 * n);
  terms.correction = std::sqrt(8.0 * weighted / n);
  return terms;
}

double bonus_bf(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                double log_factor, std::span<const double> probs,
                std::span<const double> next_values, std::uint64_t visits,
                std::span<const std::uint64_t> next_state_visits) {
  return bonus_bf_terms(horizon, num_states, num_actions, log_factor, probs, next_values, visits,
                        next_state_visits)
      .total();
}

}  // namespace ucbvi
