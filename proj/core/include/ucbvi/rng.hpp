#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace ucbvi {

/// SplitMix64 finalizer; used to derive independent stream seeds from a
/// base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

/// Deterministic random stream. Uniform and categorical draws are computed
/// from the raw 64-bit engine output so they do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() noexcept;

  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t uniform_index(std::size_t n) noexcept;

  /// Inverse-CDF draw from a probability row. Mass lost to rounding at the
  /// tail goes to the last state with positive probability.
  std::size_t categorical(std::span<const double> probs) noexcept;

  /// Gamma(shape, 1) draw, used for Dirichlet sampling.
  double gamma(double shape);

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ucbvi
