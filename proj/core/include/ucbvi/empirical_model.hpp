#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ucbvi/mdp.hpp"

namespace ucbvi {

/// Raised when an empirical row is requested for a pair that was never
/// visited; callers fall back to the optimistic default instead.
class UnknownPairError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Visit counts accumulated from completed episodes.
///
///   n(x,a)          total visits of (x,a)
///   n(x,a,y)        visits of (x,a) followed by y
///   n_step(t,x,a)   visits of (x,a) at step t
class EmpiricalModel {
 public:
  EmpiricalModel(std::size_t num_states, std::size_t num_actions, std::size_t horizon);

  /// Adds every transition of `trace`. The trace must have exactly H steps
  /// with indices in range; otherwise std::out_of_range / std::invalid_argument
  /// is thrown and the model is left untouched.
  void ingest(const EpisodeTrace& trace);

  std::uint64_t count(std::size_t x, std::size_t a) const noexcept {
    return n_sa_[x * num_actions_ + a];
  }
  std::uint64_t count(std::size_t x, std::size_t a, std::size_t y) const noexcept {
    return n_say_[(x * num_actions_ + a) * num_states_ + y];
  }
  std::uint64_t step_count(std::size_t step, std::size_t x, std::size_t a) const noexcept {
    return n_step_[(step * num_states_ + x) * num_actions_ + a];
  }
  /// Visits of state y at step `step`, summed over actions. Defined as 0 for
  /// step == H (nothing is recorded past the horizon).
  std::uint64_t state_step_count(std::size_t step, std::size_t y) const;

  bool known(std::size_t x, std::size_t a) const noexcept { return count(x, a) > 0; }

  /// Empirical row n(x,a,.)/n(x,a). Throws UnknownPairError when n(x,a) = 0.
  std::vector<double> transition_row(std::size_t x, std::size_t a) const;
  void transition_row(std::size_t x, std::size_t a, std::span<double> out) const;

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::size_t horizon() const noexcept { return horizon_; }
  std::uint64_t episodes_seen() const noexcept { return episodes_; }

  /// Checks the four count-consistency relations. Returns an empty string
  /// when all hold, otherwise a description of the first violation.
  std::string check_consistency() const;

  /// JSON checkpoint of all counts.
  std::string to_json() const;
  static EmpiricalModel from_json(std::string_view text);

  bool operator==(const EmpiricalModel&) const = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::vector<std::uint64_t> n_sa_;
  std::vector<std::uint64_t> n_say_;
  std::vector<std::uint64_t> n_step_;
  std::vector<std::uint64_t> n_state_step_;
  std::uint64_t episodes_ = 0;
};

}  // namespace ucbvi
