#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ucbvi/bonus.hpp"
#include "ucbvi/envs.hpp"
#include "ucbvi/exact.hpp"
#include "ucbvi/mdp.hpp"

namespace ucbvi {

enum class Algorithm { ucbvi_ch, ucbvi_bf, greedy, eps_greedy, ucrl_l1 };

/// Accepts the CLI spellings: ucbvi-ch, ucbvi-bf, greedy, eps-greedy, ucrl-l1.
Algorithm parse_algorithm(std::string_view name);
std::string_view to_string(Algorithm algorithm);
LogConvention parse_log_convention(std::string_view name);
std::string_view to_string(LogConvention convention);

struct AlgoConfig {
  Algorithm algorithm = Algorithm::ucbvi_bf;
  double delta = 0.1;
  double epsilon = 0.1;
  LogConvention log_convention = LogConvention::algorithm;

  void validate() const;
};

// ---------------------------------------------------------------------------
// Regret

struct EpisodeRegret {
  double increment;      // V*_1(x) - V^pi_1(x)
  double policy_value;   // V^pi_1(x)
  double optimal_value;  // V*_1(x)
};

/// Exact per-episode regret of a deterministic policy.
EpisodeRegret episode_regret(const TabularMDP& mdp, const ValueTable& optimal,
                             const Policy& policy, std::size_t start);
EpisodeRegret episode_regret(const TabularMDP& mdp, const Policy& policy, std::size_t start);

struct EpisodeRecord {
  std::size_t episode;
  std::size_t start_state;
  double regret_inc;
  double surrogate_inc;  // V_{k,1}(x) - V^pi_k_1(x)
  bool optimistic;       // V_{k,t}(x) >= V*_t(x) for every t and x
  double mean_bonus;
};

struct RegretTrace {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> episodes;
  std::vector<double> regret_cum;
  std::vector<double> surrogate_cum;

  bool always_optimistic() const noexcept;
  double final_regret() const noexcept { return regret_cum.empty() ? 0.0 : regret_cum.back(); }
  /// Cumulative regret after `episode` episodes (1-based).
  double regret_at(std::size_t episode) const { return regret_cum.at(episode - 1); }
  /// Empty when the trace invariants hold, otherwise the first violation.
  std::string check_invariants() const;
};

/// One learning run with exact regret bookkeeping against `optimal`.
RegretTrace run_regret_trace(const TabularMDP& mdp, const OptimalSolution& optimal,
                             const AlgoConfig& config, std::size_t episodes, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Regret bounds (theorem log convention)

double theorem_log_factor(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                          std::uint64_t total_steps, double delta);
/// 20 H^{3/2} L sqrt(SAK) + 250 H^2 S^2 A L^2
double ch_regret_bound(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                       std::size_t episodes, double log_factor);
/// 30 H L sqrt(SAK) + 2500 H^2 S^2 A L^2 + 4 H^{3/2} sqrt(K L)
double bf_regret_bound(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                       std::size_t episodes, double log_factor);
/// The bound that applies to `algorithm`, if any.
std::optional<double> regret_bound(Algorithm algorithm, std::size_t horizon,
                                   std::size_t num_states, std::size_t num_actions,
                                   std::size_t episodes, double log_factor);

// ---------------------------------------------------------------------------
// Sweeps

struct ScalingFit {
  double slope;
  double intercept;
  double r_squared;
  std::size_t points;
};

/// Least-squares line through (log x, log y). nullopt with fewer than two
/// points or any non-positive coordinate.
std::optional<ScalingFit> fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// 1, 2, 4, ... up to K, plus K itself.
std::vector<std::size_t> pow2_checkpoints(std::size_t episodes);
/// 2^8 .. 2^14 restricted to <= K.
std::vector<std::size_t> scaling_checkpoints(std::size_t episodes);

struct CheckpointStats {
  std::size_t episode;
  double median;
  double q25;
  double q75;
};

struct SweepResult {
  EnvSpec env;
  AlgoConfig algo;
  std::size_t episodes = 0;
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 0;
  double theorem_L = 0.0;
  std::vector<std::uint64_t> seeds;
  std::vector<RegretTrace> traces;  // in seed order
  std::vector<CheckpointStats> aggregates;
  std::optional<ScalingFit> fit;
  std::string version;

  /// Median over seeds of the cumulative regret at each checkpoint.
  std::vector<double> median_regret(std::span<const std::size_t> checkpoints) const;
  /// Regret bound at an intermediate checkpoint (L fixed from the run's T).
  std::optional<double> bound_at(std::size_t episode) const;
};

/// Runs one trace per seed, concurrently on up to `threads` workers
/// (0 = hardware concurrency). Results do not depend on the thread count.
SweepResult run_experiment(const EnvSpec& env, const AlgoConfig& algo, std::size_t episodes,
                           std::span<const std::uint64_t> seeds, std::size_t threads = 0);
SweepResult run_experiment(const TabularMDP& mdp, const EnvSpec& env, const AlgoConfig& algo,
                           std::size_t episodes, std::span<const std::uint64_t> seeds,
                           std::size_t threads = 0);

/// CSV `seed,k,regret_inc,regret_cum,surrogate_cum,optimistic,bound_thm`,
/// one row per (seed, checkpoint).
void write_csv(const SweepResult& result, std::span<const std::size_t> checkpoints,
               std::ostream& out);
/// Self-describing JSON sidecar: config, seeds, checkpoints, aggregates, fit.
std::string sidecar_json(const SweepResult& result, std::span<const std::size_t> checkpoints);

// ---------------------------------------------------------------------------
// Diagnostics

struct LtvReport {
  double return_variance;
  double variance_sum;
  double abs_difference;
  bool passed;  // abs_difference <= 1e-9
};

LtvReport ltv_report(const TabularMDP& mdp, const Policy& policy, std::size_t start);

struct OptimismReport {
  std::size_t optimistic_runs;
  std::size_t total_runs;
  double fraction;
  double threshold;  // 1 - delta - 1.96 sqrt(delta (1 - delta) / n)
  bool passed;
};

OptimismReport optimism_report(std::size_t optimistic_runs, std::size_t total_runs, double delta);
OptimismReport optimism_report(std::span<const RegretTrace> traces, double delta);

std::string version_string();

}  // namespace ucbvi
