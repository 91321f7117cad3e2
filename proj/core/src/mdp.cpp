#include "ucbvi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ucbvi/rng.hpp"

namespace ucbvi {

namespace {

constexpr double kSimplexSlack = 1e-9;

void normalize_row(std::span<double> row, std::string_view what) {
  double sum = 0.0;
  for (double& p : row) {
    if (!std::isfinite(p) || p < -kSimplexSlack) {
      throw std::invalid_argument(std::string(what) + ": negative or non-finite probability");
    }
    if (p < 0.0) p = 0.0;
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexSlack) {
    throw std::invalid_argument(std::string(what) + ": row sums to " + std::to_string(sum));
  }
  for (double& p : row) p /= sum;
}

std::string row_label(std::size_t x, std::size_t a) {
  return "transition row (" + std::to_string(x) + ", " + std::to_string(a) + ")";
}

}  // namespace

StartRule StartRule::fixed(std::size_t state) {
  StartRule rule;
  rule.kind = Kind::fixed;
  rule.state = state;
  return rule;
}

StartRule StartRule::distribution(std::vector<double> probs) {
  StartRule rule;
  rule.kind = Kind::distribution;
  rule.probs = std::move(probs);
  return rule;
}

StartRule StartRule::sequence(std::vector<std::size_t> states) {
  StartRule rule;
  rule.kind = Kind::sequence;
  rule.states = std::move(states);
  return rule;
}

TabularMDP::TabularMDP(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                       std::vector<double> transitions, std::vector<double> rewards,
                       StartRule start)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)),
      start_(std::move(start)) {
  if (num_states_ == 0 || num_actions_ == 0 || horizon_ == 0) {
    throw std::invalid_argument("TabularMDP: S, A and H must all be positive");
  }
  if (transitions_.size() != num_states_ * num_actions_ * num_states_) {
    throw std::invalid_argument("TabularMDP: transition tensor must have S*A*S entries");
  }
  if (rewards_.size() != num_states_ * num_actions_) {
    throw std::invalid_argument("TabularMDP: reward matrix must have S*A entries");
  }
  for (std::size_t x = 0; x < num_states_; ++x) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      normalize_row({transitions_.data() + (x * num_actions_ + a) * num_states_, num_states_},
                    row_label(x, a));
    }
  }
  for (double r : rewards_) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("TabularMDP: rewards must lie in [0, 1]");
    }
  }
  switch (start_.kind) {
    case StartRule::Kind::fixed:
      if (start_.state >= num_states_) {
        throw std::invalid_argument("TabularMDP: fixed start state out of range");
      }
      break;
    case StartRule::Kind::distribution:
      if (start_.probs.size() != num_states_) {
        throw std::invalid_argument("TabularMDP: start distribution must have S entries");
      }
      normalize_row(start_.probs, "start distribution");
      break;
    case StartRule::Kind::sequence:
      if (start_.states.empty()) {
        throw std::invalid_argument("TabularMDP: start sequence is empty");
      }
      for (std::size_t s : start_.states) {
        if (s >= num_states_) {
          throw std::invalid_argument("TabularMDP: start sequence state out of range");
        }
      }
      break;
  }
}

std::size_t TabularMDP::start_state(std::size_t episode, Rng& rng) const {
  switch (start_.kind) {
    case StartRule::Kind::fixed:
      return start_.state;
    case StartRule::Kind::distribution:
      return rng.categorical(start_.probs);
    case StartRule::Kind::sequence:
      return start_.states[(episode - 1) % start_.states.size()];
  }
  return 0;
}

bool TabularMDP::is_deterministic() const noexcept {
  return std::all_of(transitions_.begin(), transitions_.end(),
                     [](double p) { return p == 0.0 || p == 1.0; });
}

Policy::Policy(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
               std::vector<std::size_t> actions)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      actions_(std::move(actions)) {
  if (actions_.size() != num_states_ * horizon_) {
    throw std::invalid_argument("Policy: expected H*S action entries");
  }
  for (std::size_t a : actions_) {
    if (a >= num_actions_) throw std::invalid_argument("Policy: action index out of range");
  }
}

Policy Policy::constant(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                        std::size_t action) {
  return Policy(num_states, num_actions, horizon,
                std::vector<std::size_t>(num_states * horizon, action));
}

std::size_t argmax_lowest(std::span<const double> row) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// JSON

std::string to_json(const TabularMDP& mdp) {
  using nlohmann::json;
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  json p = json::array();
  json r = json::array();
  for (std::size_t x = 0; x < S; ++x) {
    json px = json::array();
    json rx = json::array();
    for (std::size_t a = 0; a < A; ++a) {
      auto row = mdp.transition_row(x, a);
      px.push_back(std::vector<double>(row.begin(), row.end()));
      rx.push_back(mdp.reward(x, a));
    }
    p.push_back(std::move(px));
    r.push_back(std::move(rx));
  }
  json start;
  const auto& rule = mdp.start_rule();
  switch (rule.kind) {
    case StartRule::Kind::fixed:
      start = {{"kind", "fixed"}, {"state", rule.state}};
      break;
    case StartRule::Kind::distribution:
      start = {{"kind", "dist"}, {"probs", rule.probs}};
      break;
    case StartRule::Kind::sequence:
      start = {{"kind", "sequence"}, {"states", rule.states}};
      break;
  }
  json doc = {{"S", S}, {"A", A}, {"H", mdp.horizon()}, {"P", p}, {"R", r}, {"start", start}};
  return doc.dump(2);
}

TabularMDP mdp_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("MDP JSON: ") + e.what());
  }
  try {
    const auto S = doc.at("S").get<std::size_t>();
    const auto A = doc.at("A").get<std::size_t>();
    const auto H = doc.at("H").get<std::size_t>();
    const auto& p = doc.at("P");
    const auto& r = doc.at("R");
    if (p.size() != S || r.size() != S) {
      throw std::invalid_argument("MDP JSON: P and R must have S rows");
    }
    std::vector<double> transitions;
    std::vector<double> rewards;
    transitions.reserve(S * A * S);
    rewards.reserve(S * A);
    for (std::size_t x = 0; x < S; ++x) {
      if (p[x].size() != A || r[x].size() != A) {
        throw std::invalid_argument("MDP JSON: P[x] and R[x] must have A entries");
      }
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = p[x][a].get<std::vector<double>>();
        if (row.size() != S) throw std::invalid_argument("MDP JSON: P[x][a] must have S entries");
        transitions.insert(transitions.end(), row.begin(), row.end());
        rewards.push_back(r[x][a].get<double>());
      }
    }
    StartRule start = StartRule::fixed(0);
    if (doc.contains("start")) {
      const auto& s = doc.at("start");
      const auto kind = s.at("kind").get<std::string>();
      if (kind == "fixed") {
        start = StartRule::fixed(s.at("state").get<std::size_t>());
      } else if (kind == "dist") {
        start = StartRule::distribution(s.at("probs").get<std::vector<double>>());
      } else if (kind == "sequence") {
        start = StartRule::sequence(s.at("states").get<std::vector<std::size_t>>());
      } else {
        throw std::invalid_argument("MDP JSON: unknown start kind '" + kind + "'");
      }
    }
    return TabularMDP(S, A, H, std::move(transitions), std::move(rewards), std::move(start));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("MDP JSON: ") + e.what());
  }
}

TabularMDP load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open MDP file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return mdp_from_json(buffer.str());
}

void save_mdp(const TabularMDP& mdp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write MDP file '" + path + "'");
  out << to_json(mdp) << '\n';
  if (!out) throw std::runtime_error("failed writing MDP file '" + path + "'");
}

}  // namespace ucbvi
