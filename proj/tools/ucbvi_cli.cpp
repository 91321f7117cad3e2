// Command-line front end: experiments, seed sweeps and exact oracles.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ucbvi/exact.hpp"
#include "ucbvi/harness.hpp"
#include "ucbvi/rng.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ucbvi;

/// I/O failures map to exit status 1; everything else that escapes the
/// handlers is a configuration problem (exit 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnvOptions {
  std::string env = "chain";
  std::size_t S = 5;
  std::size_t A = 2;
  std::size_t H = 5;
  double p_succ = 0.8;
  double alpha = 1.0;
  double eps = 0.1;
  std::string mdp_file;
};

struct AlgoOptions {
  std::string algo = "ucbvi-bf";
  double delta = 0.1;
  double epsilon = 0.1;
  std::string log_convention = "algorithm";
};

struct RunOptions {
  std::size_t K = 1000;
  std::uint64_t seed = 0;
  std::size_t seeds = 1;
  std::string out;
  std::string checkpoints = "pow2";
  std::size_t threads = 0;
};

void add_env_flags(CLI::App& cmd, EnvOptions& o) {
  cmd.add_option("--env", o.env, "Environment: chain, random, hard-bandit, file")
      ->capture_default_str();
  cmd.add_option("--S", o.S, "Number of states")->capture_default_str();
  cmd.add_option("--A", o.A, "Number of actions")->capture_default_str();
  cmd.add_option("--H", o.H, "Horizon")->capture_default_str();
  cmd.add_option("--p-succ", o.p_succ, "Chain: success probability of 'right'")
      ->capture_default_str();
  cmd.add_option("--alpha", o.alpha, "Random: Dirichlet concentration")->capture_default_str();
  cmd.add_option("--eps", o.eps, "Hard bandit: gap of action 0")->capture_default_str();
  cmd.add_option("--mdp-file", o.mdp_file, "File environment: path to an MDP JSON document");
}

void add_algo_flags(CLI::App& cmd, AlgoOptions& o) {
  cmd.add_option("--algo", o.algo, "Learner: ucbvi-ch, ucbvi-bf, greedy, eps-greedy, ucrl-l1")
      ->capture_default_str();
  cmd.add_option("--delta", o.delta, "Confidence parameter delta")->capture_default_str();
  cmd.add_option("--epsilon", o.epsilon, "eps-greedy exploration rate")->capture_default_str();
  cmd.add_option("--log-convention", o.log_convention,
                 "Bonus log factor: algorithm (ln 5SAT/delta) or theorem (ln 5HSAT/delta)")
      ->capture_default_str();
}

EnvSpec make_spec(const EnvOptions& o, std::uint64_t seed) {
  EnvSpec spec;
  spec.kind = parse_env_kind(o.env);
  spec.num_states = o.S;
  spec.num_actions = o.A;
  spec.horizon = o.H;
  spec.p_succ = o.p_succ;
  spec.alpha = o.alpha;
  spec.eps = o.eps;
  spec.path = o.mdp_file;
  spec.seed = seed;
  return spec;
}

TabularMDP build_env(const EnvSpec& spec) {
  try {
    return make_env(spec);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

AlgoConfig make_algo(const AlgoOptions& o) {
  AlgoConfig config;
  config.algorithm = parse_algorithm(o.algo);
  config.delta = o.delta;
  config.epsilon = o.epsilon;
  config.log_convention = parse_log_convention(o.log_convention);
  config.validate();
  return config;
}

std::vector<std::size_t> parse_checkpoints(const std::string& text, std::size_t K) {
  if (text == "pow2") return pow2_checkpoints(K);
  std::vector<std::size_t> out;
  if (text == "all") {
    for (std::size_t k = 1; k <= K; ++k) out.push_back(k);
    return out;
  }
  std::size_t stride = 0;
  try {
    std::size_t used = 0;
    stride = std::stoul(text, &used);
    if (used != text.size()) stride = 0;
  } catch (const std::exception&) {
    stride = 0;
  }
  if (stride == 0) throw std::invalid_argument("--checkpoints must be pow2, all, or a positive stride");
  for (std::size_t k = stride; k <= K; k += stride) out.push_back(k);
  if (out.empty() || out.back() != K) out.push_back(K);
  return out;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t count) {
  if (count == 0) throw std::invalid_argument("--seeds must be at least 1");
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
  return seeds;
}

fs::path output_path(const std::string& requested, const char* fallback_name) {
  if (!requested.empty()) return requested;
  if (const char* dir = std::getenv("UCBVI_OUT_DIR"); dir && *dir) return fs::path(dir) / fallback_name;
  return fallback_name;
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path json = csv;
  json.replace_extension(".json");
  if (json == csv) json += ".json";
  return json;
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string fmt(double value, int digits = 12) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

// ---------------------------------------------------------------------------

int cmd_run(const EnvOptions& env_opts, const AlgoOptions& algo_opts, const RunOptions& run) {
  const EnvSpec spec = make_spec(env_opts, run.seed);
  const AlgoConfig algo = make_algo(algo_opts);
  if (run.K == 0) throw std::invalid_argument("--K must be positive");
  const auto checkpoints = parse_checkpoints(run.checkpoints, run.K);
  const auto seeds = seed_list(run.seed, run.seeds);
  const TabularMDP mdp = build_env(spec);

  const SweepResult result = run_experiment(mdp, spec, algo, run.K, seeds, run.threads);

  std::ostringstream csv;
  write_csv(result, checkpoints, csv);
  const fs::path csv_path = output_path(run.out, "run.csv");
  write_file(csv_path, csv.str());
  write_file(sidecar_path(csv_path), sidecar_json(result, checkpoints) + "\n");

  const auto& final = result.aggregates.back();
  std::size_t optimistic = 0;
  for (const auto& t : result.traces) optimistic += t.always_optimistic() ? 1 : 0;
  std::cout << "algo " << to_string(algo.algorithm) << ", env " << to_string(spec.kind)
            << " (S=" << mdp.num_states() << ", A=" << mdp.num_actions()
            << ", H=" << mdp.horizon() << "), K=" << run.K << ", seeds=" << seeds.size() << '\n';
  std::cout << "median regret(K) = " << fmt(final.median) << " [q25 " << fmt(final.q25)
            << ", q75 " << fmt(final.q75) << "]\n";
  if (auto bound = result.bound_at(run.K)) std::cout << "regret bound(K) = " << fmt(*bound) << '\n';
  if (result.fit) {
    std::cout << "log-log slope = " << fmt(result.fit->slope, 6) << " (R^2 "
              << fmt(result.fit->r_squared, 6) << ", " << result.fit->points << " points)\n";
  }
  std::cout << "always-optimistic runs = " << optimistic << "/" << seeds.size() << '\n';
  std::cout << "wrote " << csv_path.string() << " and " << sidecar_path(csv_path).string() << '\n';
  return 0;
}

std::vector<std::size_t> parse_list(const std::vector<std::size_t>& given, std::size_t fallback) {
  return given.empty() ? std::vector<std::size_t>{fallback} : given;
}

int cmd_sweep(const EnvOptions& env_opts, const AlgoOptions& algo_opts, const RunOptions& run,
              const std::vector<std::size_t>& k_list, const std::vector<std::size_t>& s_list,
              const std::vector<std::size_t>& h_list) {
  const AlgoConfig algo = make_algo(algo_opts);
  const auto seeds = seed_list(run.seed, run.seeds);
  const auto Ks = parse_list(k_list, run.K);
  const auto Ss = parse_list(s_list, env_opts.S);
  const auto Hs = parse_list(h_list, env_opts.H);

  std::ostringstream csv;
  csv << "S,A,H,K,seed,regret_cum,bound_thm\n";
  nlohmann::json grid = nlohmann::json::array();
  for (std::size_t S : Ss) {
    for (std::size_t H : Hs) {
      EnvOptions point = env_opts;
      point.S = S;
      point.H = H;
      const EnvSpec spec = make_spec(point, run.seed);
      const TabularMDP mdp = build_env(spec);
      std::vector<double> xs, medians;
      for (std::size_t K : Ks) {
        if (K == 0) throw std::invalid_argument("--K-list entries must be positive");
        const SweepResult result = run_experiment(mdp, spec, algo, K, seeds, run.threads);
        const auto bound = result.bound_at(K);
        for (const auto& trace : result.traces) {
          csv << mdp.num_states() << ',' << mdp.num_actions() << ',' << mdp.horizon() << ',' << K
              << ',' << trace.seed << ',' << fmt(trace.final_regret(), 17) << ','
              << (bound ? fmt(*bound, 17) : "") << '\n';
        }
        const auto& final = result.aggregates.back();
        xs.push_back(static_cast<double>(K));
        medians.push_back(final.median);
        grid.push_back({{"S", mdp.num_states()},
                        {"A", mdp.num_actions()},
                        {"H", mdp.horizon()},
                        {"K", K},
                        {"median", final.median},
                        {"q25", final.q25},
                        {"q75", final.q75}});
        std::cout << "S=" << mdp.num_states() << " H=" << mdp.horizon() << " K=" << K
                  << " median regret " << fmt(final.median) << '\n';
      }
      if (const auto fit = fit_loglog(xs, medians)) {
        std::cout << "S=" << mdp.num_states() << " H=" << mdp.horizon()
                  << " log-log slope over K = " << fmt(fit->slope, 6) << '\n';
      }
    }
  }
  const fs::path csv_path = output_path(run.out, "sweep.csv");
  write_file(csv_path, csv.str());
  nlohmann::json sidecar = {{"version", version_string()},
                            {"env", env_opts.env},
                            {"p_succ", env_opts.p_succ},
                            {"alpha", env_opts.alpha},
                            {"eps", env_opts.eps},
                            {"A", env_opts.A},
                            {"algo", algo_opts.algo},
                            {"delta", algo.delta},
                            {"epsilon", algo.epsilon},
                            {"log_convention", algo_opts.log_convention},
                            {"seeds", seeds},
                            {"K_list", Ks},
                            {"S_list", Ss},
                            {"H_list", Hs},
                            {"grid", grid}};
  if (!env_opts.mdp_file.empty()) sidecar["mdp_file"] = env_opts.mdp_file;
  write_file(sidecar_path(csv_path), sidecar.dump(2) + "\n");
  std::cout << "wrote " << csv_path.string() << " and " << sidecar_path(csv_path).string() << '\n';
  return 0;
}

int cmd_check_ltv(const EnvOptions& env_opts, std::uint64_t seed, const std::string& policy_kind,
                  std::size_t start) {
  const TabularMDP mdp = build_env(make_spec(env_opts, seed));
  if (start >= mdp.num_states()) throw std::invalid_argument("--start out of range");
  Policy policy = optimal_values(mdp).policy;
  if (policy_kind == "random") {
    Rng rng(derive_seed(seed, 2));
    std::vector<std::size_t> actions(mdp.num_states() * mdp.horizon());
    for (auto& a : actions) a = rng.uniform_index(mdp.num_actions());
    policy = Policy(mdp.num_states(), mdp.num_actions(), mdp.horizon(), std::move(actions));
  } else if (policy_kind != "optimal") {
    throw std::invalid_argument("--policy must be random or optimal");
  }
  const LtvReport report = ltv_report(mdp, policy, start);
  std::cout << "return_variance = " << fmt(report.return_variance, 17) << '\n'
            << "expected_variance_sum = " << fmt(report.variance_sum, 17) << '\n'
            << "abs_difference = " << fmt(report.abs_difference, 17) << '\n'
            << "status = " << (report.passed ? "MATCH" : "MISMATCH") << '\n';
  return report.passed ? 0 : 1;
}

int cmd_eval_exact(const EnvOptions& env_opts, std::uint64_t seed) {
  const TabularMDP mdp = build_env(make_spec(env_opts, seed));
  const OptimalSolution sol = optimal_values(mdp);
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    for (std::size_t x = 0; x < S; ++x) {
      std::cout << "V*_" << t + 1 << '(' << x << ") = " << fmt(sol.values(t, x)) << '\n';
    }
  }
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    for (std::size_t x = 0; x < S; ++x) {
      for (std::size_t a = 0; a < A; ++a) {
        std::cout << "Q*_" << t + 1 << '(' << x << ',' << a << ") = " << fmt(sol.q(t, x, a))
                  << '\n';
      }
    }
  }
  for (std::size_t t = 0; t < mdp.horizon(); ++t) {
    for (std::size_t x = 0; x < S; ++x) {
      std::cout << "pi*_" << t + 1 << '(' << x << ") = " << sol.policy.action(t, x) << '\n';
    }
  }
  return 0;
}

int cmd_gen_env(const EnvOptions& env_opts, std::uint64_t seed, const std::string& out) {
  const TabularMDP mdp = build_env(make_spec(env_opts, seed));
  if (out.empty()) {
    std::cout << to_json(mdp) << '\n';
  } else {
    write_file(out, to_json(mdp) + "\n");
    std::cout << "wrote " << out << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ucbvi: optimistic exploration in tabular finite-horizon MDPs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ucbvi::version_string());

  EnvOptions env;
  AlgoOptions algo;
  RunOptions run;

  auto* run_cmd = app.add_subcommand("run", "Run one experiment over --seeds seeds; writes CSV + JSON");
  add_env_flags(*run_cmd, env);
  add_algo_flags(*run_cmd, algo);
  run_cmd->add_option("--K", run.K, "Episodes per run")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Base seed (env seed; runs use seed..seed+N-1)")
      ->capture_default_str();
  run_cmd->add_option("--seeds", run.seeds, "Number of seeded runs")->capture_default_str();
  run_cmd->add_option("--out", run.out,
                      "CSV output path (default $UCBVI_OUT_DIR/run.csv or ./run.csv)");
  run_cmd->add_option("--checkpoints", run.checkpoints, "Rows to emit: pow2, all, or a stride")
      ->capture_default_str();
  run_cmd->add_option("--threads", run.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();

  std::vector<std::size_t> k_list, s_list, h_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over K/S/H for scaling studies");
  add_env_flags(*sweep_cmd, env);
  add_algo_flags(*sweep_cmd, algo);
  sweep_cmd->add_option("--K", run.K, "Episodes when --K-list is not given")->capture_default_str();
  sweep_cmd->add_option("--K-list", k_list, "Episode counts")->delimiter(',');
  sweep_cmd->add_option("--S-list", s_list, "State counts")->delimiter(',');
  sweep_cmd->add_option("--H-list", h_list, "Horizons")->delimiter(',');
  sweep_cmd->add_option("--seed", run.seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--seeds", run.seeds, "Seeded runs per grid point")->capture_default_str();
  sweep_cmd->add_option("--out", run.out,
                        "CSV output path (default $UCBVI_OUT_DIR/sweep.csv or ./sweep.csv)");
  sweep_cmd->add_option("--threads", run.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();

  std::string policy_kind = "random";
  std::size_t start = 0;
  auto* ltv_cmd = app.add_subcommand("check-ltv", "Compare the two exact return-variance recursions");
  add_env_flags(*ltv_cmd, env);
  ltv_cmd->add_option("--seed", run.seed, "Env and policy seed")->capture_default_str();
  ltv_cmd->add_option("--policy", policy_kind, "random or optimal")->capture_default_str();
  ltv_cmd->add_option("--start", start, "Start state")->capture_default_str();

  auto* exact_cmd = app.add_subcommand("eval-exact", "Print V*, Q* and pi*");
  add_env_flags(*exact_cmd, env);
  exact_cmd->add_option("--seed", run.seed, "Env seed")->capture_default_str();

  auto* gen_cmd = app.add_subcommand("gen-env", "Write a generated MDP as JSON");
  add_env_flags(*gen_cmd, env);
  gen_cmd->add_option("--seed", run.seed, "Env seed")->capture_default_str();
  gen_cmd->add_option("--out", run.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 2;
  }

  try {
    if (*run_cmd) return cmd_run(env, algo, run);
    if (*sweep_cmd) return cmd_sweep(env, algo, run, k_list, s_list, h_list);
    if (*ltv_cmd) return cmd_check_ltv(env, run.seed, policy_kind, start);
    if (*exact_cmd) return cmd_eval_exact(env, run.seed);
    if (*gen_cmd) return cmd_gen_env(env, run.seed, run.out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help() << '\n';
    return 2;
  }
  return 2;
}
