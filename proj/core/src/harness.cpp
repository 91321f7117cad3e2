#include "ucbvi/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "ucbvi/agent.hpp"
#include "ucbvi/baselines.hpp"
#include "ucbvi/rng.hpp"
#include "ucbvi/version.hpp"

namespace ucbvi {

namespace {

constexpr double kValueSlack = 1e-9;

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace

Algorithm parse_algorithm(std::string_view name) {
  if (name == "ucbvi-ch") return Algorithm::ucbvi_ch;
  if (name == "ucbvi-bf") return Algorithm::ucbvi_bf;
  if (name == "greedy") return Algorithm::greedy;
  if (name == "eps-greedy") return Algorithm::eps_greedy;
  if (name == "ucrl-l1") return Algorithm::ucrl_l1;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ucbvi_ch: return "ucbvi-ch";
    case Algorithm::ucbvi_bf: return "ucbvi-bf";
    case Algorithm::greedy: return "greedy";
    case Algorithm::eps_greedy: return "eps-greedy";
    case Algorithm::ucrl_l1: return "ucrl-l1";
  }
  return "?";
}

LogConvention parse_log_convention(std::string_view name) {
  if (name == "algorithm") return LogConvention::algorithm;
  if (name == "theorem") return LogConvention::theorem;
  throw std::invalid_argument("unknown log convention '" + std::string(name) + "'");
}

std::string_view to_string(LogConvention convention) {
  return convention == LogConvention::algorithm ? "algorithm" : "theorem";
}

void AlgoConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
}

// ---------------------------------------------------------------------------

EpisodeRegret episode_regret(const TabularMDP& mdp, const ValueTable& optimal,
                             const Policy& policy, std::size_t start) {
  const ValueTable values = policy_values(mdp, policy);
  return {optimal(0, start) - values(0, start), values(0, start), optimal(0, start)};
}

EpisodeRegret episode_regret(const TabularMDP& mdp, const Policy& policy, std::size_t start) {
  return episode_regret(mdp, optimal_values(mdp).values, policy, start);
}

bool RegretTrace::always_optimistic() const noexcept {
  return std::all_of(episodes.begin(), episodes.end(),
                     [](const EpisodeRecord& e) { return e.optimistic; });
}

std::string RegretTrace::check_invariants() const {
  if (regret_cum.size() != episodes.size() || surrogate_cum.size() != episodes.size()) {
    return "cumulative columns have the wrong length";
  }
  double regret = 0.0;
  double surrogate = 0.0;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& e = episodes[i];
    if (e.regret_inc < -kValueSlack) {
      return "negative regret increment at episode " + std::to_string(e.episode);
    }
    if (e.optimistic && e.surrogate_inc < e.regret_inc - kValueSlack) {
      return "surrogate regret below true regret under optimism at episode " +
             std::to_string(e.episode);
    }
    regret += e.regret_inc;
    surrogate += e.surrogate_inc;
    if (regret_cum[i] != regret || surrogate_cum[i] != surrogate) {
      return "cumulative column is not the prefix sum at episode " + std::to_string(e.episode);
    }
  }
  return {};
}

RegretTrace run_regret_trace(const TabularMDP& mdp, const OptimalSolution& optimal,
                             const AlgoConfig& config, std::size_t episodes, std::uint64_t seed) {
  config.validate();
  const std::size_t S = mdp.num_states();
  const std::size_t H = mdp.horizon();
  RegretTrace trace;
  trace.seed = seed;
  trace.episodes.reserve(episodes);

  const double epsilon = config.algorithm == Algorithm::eps_greedy ? config.epsilon : 0.0;
  auto observer = [&](const QTables& tables, const EpisodeTrace& episode) {
    const Policy policy = tables.greedy_policy();
    const std::size_t start = episode.steps.front().state;
    const ValueTable values =
        epsilon > 0.0 ? mixed_policy_values(mdp, policy, epsilon) : policy_values(mdp, policy);
    bool optimistic = true;
    for (std::size_t t = 0; t < H && optimistic; ++t) {
      for (std::size_t x = 0; x < S; ++x) {
        if (tables.v(t, x) < optimal.values(t, x) - kValueSlack) {
          optimistic = false;
          break;
        }
      }
    }
    trace.episodes.push_back({episode.episode, start, optimal.values(0, start) - values(0, start),
                              tables.v(0, start) - values(0, start), optimistic, 0.0});
  };

  const std::uint64_t stream = derive_seed(seed, 1);
  LearnerRun run = [&] {
    switch (config.algorithm) {
      case Algorithm::ucbvi_ch:
      case Algorithm::ucbvi_bf: {
        BonusConfig bonus;
        bonus.delta = config.delta;
        bonus.variant = config.algorithm == Algorithm::ucbvi_ch ? BonusVariant::chernoff_hoeffding
                                                                : BonusVariant::bernstein_freedman;
        bonus.log_convention = config.log_convention;
        return run_learner(mdp, episodes, bonus, stream, observer);
      }
      case Algorithm::greedy:
        return run_baseline(mdp, episodes, {BaselineKind::zero_bonus, 0.0, config.delta}, stream,
                            observer);
      case Algorithm::eps_greedy:
        return run_baseline(mdp, episodes,
                            {BaselineKind::epsilon_greedy, config.epsilon, config.delta}, stream,
                            observer);
      case Algorithm::ucrl_l1:
        return run_baseline(mdp, episodes, {BaselineKind::l1_optimistic, 0.0, config.delta},
                            stream, observer);
    }
    throw std::invalid_argument("unknown algorithm");
  }();

  trace.regret_cum.reserve(episodes);
  trace.surrogate_cum.reserve(episodes);
  double regret = 0.0;
  double surrogate = 0.0;
  for (std::size_t i = 0; i < trace.episodes.size(); ++i) {
    trace.episodes[i].mean_bonus = run.summaries[i].mean_visited_bonus;
    regret += trace.episodes[i].regret_inc;
    surrogate += trace.episodes[i].surrogate_inc;
    trace.regret_cum.push_back(regret);
    trace.surrogate_cum.push_back(surrogate);
  }
  return trace;
}

// ---------------------------------------------------------------------------

double theorem_log_factor(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                          std::uint64_t total_steps, double delta) {
  return std::log(5.0 * static_cast<double>(horizon) * static_cast<double>(num_states) *
                  static_cast<double>(num_actions) * static_cast<double>(total_steps) / delta);
}

double ch_regret_bound(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                       std::size_t episodes, double log_factor) {
  const double H = static_cast<double>(horizon);
  const double S = static_cast<double>(num_states);
  const double A = static_cast<double>(num_actions);
  const double K = static_cast<double>(episodes);
  const double L = log_factor;
  return 20.0 * std::pow(H, 1.5) * L * std::sqrt(S * A * K) + 250.0 * H * H * S * S * A * L * L;
}

double bf_regret_bound(std::size_t horizon, std::size_t num_states, std::size_t num_actions,
                       std::size_t episodes, double log_factor) {
  const double H = static_cast<double>(horizon);
  const double S = static_cast<double>(num_states);
  const double A = static_cast<double>(num_actions);
  const double K = static_cast<double>(episodes);
  const double L = log_factor;
  return 30.0 * H * L * std::sqrt(S * A * K) + 2500.0 * H * H * S * S * A * L * L +
         4.0 * std::pow(H, 1.5) * std::sqrt(K * L);
}

std::optional<double> regret_bound(Algorithm algorithm, std::size_t horizon,
                                   std::size_t num_states, std::size_t num_actions,
                                   std::size_t episodes, double log_factor) {
  switch (algorithm) {
    case Algorithm::ucbvi_ch:
      return ch_regret_bound(horizon, num_states, num_actions, episodes, log_factor);
    case Algorithm::ucbvi_bf:
      return bf_regret_bound(horizon, num_states, num_actions, episodes, log_factor);
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

std::optional<ScalingFit> fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) return std::nullopt;
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  if (vxx <= 0.0) return std::nullopt;
  const double slope = vxy / vxx;
  const double intercept = (sy - slope * sx) / n;
  const double r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return ScalingFit{slope, intercept, r2, xs.size()};
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<std::size_t> pow2_checkpoints(std::size_t episodes) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1; k <= episodes; k *= 2) out.push_back(k);
  if (episodes > 0 && out.back() != episodes) out.push_back(episodes);
  return out;
}

std::vector<std::size_t> scaling_checkpoints(std::size_t episodes) {
  std::vector<std::size_t> out;
  for (std::size_t k = std::size_t{1} << 8; k <= (std::size_t{1} << 14) && k <= episodes; k *= 2) {
    out.push_back(k);
  }
  return out;
}

std::vector<double> SweepResult::median_regret(std::span<const std::size_t> checkpoints) const {
  std::vector<double> out;
  out.reserve(checkpoints.size());
  std::vector<double> column(traces.size());
  for (std::size_t k : checkpoints) {
    for (std::size_t i = 0; i < traces.size(); ++i) column[i] = traces[i].regret_at(k);
    out.push_back(quantile(column, 0.5));
  }
  return out;
}

std::optional<double> SweepResult::bound_at(std::size_t episode) const {
  return regret_bound(algo.algorithm, horizon, num_states, num_actions, episode, theorem_L);
}

SweepResult run_experiment(const EnvSpec& env, const AlgoConfig& algo, std::size_t episodes,
                           std::span<const std::uint64_t> seeds, std::size_t threads) {
  return run_experiment(make_env(env), env, algo, episodes, seeds, threads);
}

SweepResult run_experiment(const TabularMDP& mdp, const EnvSpec& env, const AlgoConfig& algo,
                           std::size_t episodes, std::span<const std::uint64_t> seeds,
                           std::size_t threads) {
  algo.validate();
  if (episodes == 0) throw std::invalid_argument("run_experiment: K must be positive");
  if (seeds.empty()) throw std::invalid_argument("run_experiment: at least one seed required");

  SweepResult result;
  result.env = env;
  result.algo = algo;
  result.episodes = episodes;
  result.num_states = mdp.num_states();
  result.num_actions = mdp.num_actions();
  result.horizon = mdp.horizon();
  result.theorem_L = theorem_log_factor(mdp.num_states(), mdp.num_actions(), mdp.horizon(),
                                        episodes * mdp.horizon(), algo.delta);
  result.seeds.assign(seeds.begin(), seeds.end());
  result.traces.resize(seeds.size());
  result.version = version_string();

  const OptimalSolution optimal = optimal_values(mdp);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        result.traces[i] = run_regret_trace(mdp, optimal, algo, episodes, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> column(seeds.size());
  for (std::size_t k : pow2_checkpoints(episodes)) {
    for (std::size_t i = 0; i < seeds.size(); ++i) column[i] = result.traces[i].regret_at(k);
    result.aggregates.push_back(
        {k, quantile(column, 0.5), quantile(column, 0.25), quantile(column, 0.75)});
  }
  const auto scaling = scaling_checkpoints(episodes);
  const auto medians = result.median_regret(scaling);
  std::vector<double> xs(scaling.begin(), scaling.end());
  result.fit = fit_loglog(xs, medians);
  return result;
}

void write_csv(const SweepResult& result, std::span<const std::size_t> checkpoints,
               std::ostream& out) {
  out << "seed,k,regret_inc,regret_cum,surrogate_cum,optimistic,bound_thm\n";
  for (const auto& trace : result.traces) {
    for (std::size_t k : checkpoints) {
      if (k == 0 || k > trace.episodes.size()) continue;
      const auto& e = trace.episodes[k - 1];
      out << trace.seed << ',' << k << ',' << format_double(e.regret_inc) << ','
          << format_double(trace.regret_cum[k - 1]) << ','
          << format_double(trace.surrogate_cum[k - 1]) << ',' << (e.optimistic ? 1 : 0) << ',';
      if (auto bound = result.bound_at(k)) out << format_double(*bound);
      out << '\n';
    }
  }
}

std::string sidecar_json(const SweepResult& result, std::span<const std::size_t> checkpoints) {
  using nlohmann::json;
  json env = {{"kind", std::string(to_string(result.env.kind))},
              {"S", result.num_states},
              {"A", result.num_actions},
              {"H", result.horizon},
              {"p_succ", result.env.p_succ},
              {"alpha", result.env.alpha},
              {"eps", result.env.eps},
              {"seed", result.env.seed}};
  if (result.env.kind == EnvKind::from_file) env["path"] = result.env.path;
  json algo = {{"name", std::string(to_string(result.algo.algorithm))},
               {"delta", result.algo.delta},
               {"epsilon", result.algo.epsilon},
               {"log_convention", std::string(to_string(result.algo.log_convention))}};
  json aggregates = json::array();
  for (const auto& a : result.aggregates) {
    aggregates.push_back({{"k", a.episode}, {"median", a.median}, {"q25", a.q25}, {"q75", a.q75}});
  }
  json doc = {{"version", result.version},
              {"env", env},
              {"algo", algo},
              {"K", result.episodes},
              {"seeds", result.seeds},
              {"checkpoints", std::vector<std::size_t>(checkpoints.begin(), checkpoints.end())},
              {"theorem_log_factor", result.theorem_L},
              {"aggregates", aggregates}};
  if (result.fit) {
    doc["loglog_fit"] = {{"slope", result.fit->slope},
                         {"intercept", result.fit->intercept},
                         {"r_squared", result.fit->r_squared},
                         {"points", result.fit->points}};
  } else {
    doc["loglog_fit"] = nullptr;
  }
  std::size_t optimistic = 0;
  for (const auto& t : result.traces) optimistic += t.always_optimistic() ? 1 : 0;
  doc["always_optimistic_runs"] = optimistic;
  return doc.dump(2);
}

// ---------------------------------------------------------------------------

LtvReport ltv_report(const TabularMDP& mdp, const Policy& policy, std::size_t start) {
  const double lhs = return_variance(mdp, policy, start);
  const double rhs = expected_variance_sum(mdp, policy, start);
  const double diff = std::abs(lhs - rhs);
  return {lhs, rhs, diff, diff <= 1e-9};
}

OptimismReport optimism_report(std::size_t optimistic_runs, std::size_t total_runs, double delta) {
  if (total_runs == 0) throw std::invalid_argument("optimism_report: no runs");
  if (optimistic_runs > total_runs) throw std::invalid_argument("optimism_report: runs mismatch");
  const double n = static_cast<double>(total_runs);
  const double fraction = static_cast<double>(optimistic_runs) / n;
  const double threshold = 1.0 - delta - 1.96 * std::sqrt(delta * (1.0 - delta) / n);
  return {optimistic_runs, total_runs, fraction, threshold, fraction >= threshold};
}

OptimismReport optimism_report(std::span<const RegretTrace> traces, double delta) {
  std::size_t optimistic = 0;
  for (const auto& t : traces) optimistic += t.always_optimistic() ? 1 : 0;
  return optimism_report(optimistic, traces.size(), delta);
}

std::string version_string() { return UCBVI_VERSION_STRING; }

}  // namespace ucbvi
