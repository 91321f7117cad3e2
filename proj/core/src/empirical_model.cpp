#include "ucbvi/empirical_model.hpp"

#include <json.hpp>

namespace ucbvi {

EmpiricalModel::EmpiricalModel(std::size_t num_states, std::size_t num_actions,
                               std::size_t horizon)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      n_sa_(num_states * num_actions, 0),
      n_say_(num_states * num_actions * num_states, 0),
      n_step_(horizon * num_states * num_actions, 0),
      n_state_step_(horizon * num_states, 0) {
  if (num_states == 0 || num_actions == 0 || horizon == 0) {
    throw std::invalid_argument("EmpiricalModel: S, A and H must all be positive");
  }
}

void EmpiricalModel::ingest(const EpisodeTrace& trace) {
  if (trace.steps.size() != horizon_) {
    throw std::invalid_argument("EmpiricalModel::ingest: trace has " +
                                std::to_string(trace.steps.size()) + " steps, expected " +
                                std::to_string(horizon_));
  }
  for (std::size_t t = 0; t < horizon_; ++t) {
    const auto& s = trace.steps[t];
    if (s.state >= num_states_ || s.next_state >= num_states_ || s.action >= num_actions_) {
      throw std::out_of_range("EmpiricalModel::ingest: step " + std::to_string(t) +
                              " has state/action index out of range (x=" +
                              std::to_string(s.state) + ", a=" + std::to_string(s.action) +
                              ", y=" + std::to_string(s.next_state) + ")");
    }
  }
  for (std::size_t t = 0; t < horizon_; ++t) {
    const auto& s = trace.steps[t];
    const std::size_t pair = s.state * num_actions_ + s.action;
    ++n_sa_[pair];
    ++n_say_[pair * num_states_ + s.next_state];
    ++n_step_[(t * num_states_ + s.state) * num_actions_ + s.action];
    ++n_state_step_[t * num_states_ + s.state];
  }
  ++episodes_;
}

std::uint64_t EmpiricalModel::state_step_count(std::size_t step, std::size_t y) const {
  if (y >= num_states_ || step > horizon_) {
    throw std::out_of_range("state_step_count: index out of range");
  }
  if (step == horizon_) return 0;
  return n_state_step_[step * num_states_ + y];
}

std::vector<double> EmpiricalModel::transition_row(std::size_t x, std::size_t a) const {
  std::vector<double> row(num_states_);
  transition_row(x, a, row);
  return row;
}

void EmpiricalModel::transition_row(std::size_t x, std::size_t a, std::span<double> out) const {
  const std::uint64_t n = count(x, a);
  if (n == 0) {
    throw UnknownPairError("no observations for pair (" + std::to_string(x) + ", " +
                           std::to_string(a) + ")");
  }
  const double inv = 1.0 / static_cast<double>(n);
  const std::uint64_t* counts = n_say_.data() + (x * num_actions_ + a) * num_states_;
  for (std::size_t y = 0; y < num_states_; ++y) out[y] = static_cast<double>(counts[y]) * inv;
}

std::string EmpiricalModel::check_consistency() const {
  for (std::size_t x = 0; x < num_states_; ++x) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      std::uint64_t over_next = 0;
      for (std::size_t y = 0; y < num_states_; ++y) over_next += count(x, a, y);
      if (over_next != count(x, a)) {
        return "sum_y n(x,a,y) != n(x,a) at (" + std::to_string(x) + ", " + std::to_string(a) +
               ")";
      }
      std::uint64_t over_steps = 0;
      for (std::size_t t = 0; t < horizon_; ++t) over_steps += step_count(t, x, a);
      if (over_steps != count(x, a)) {
        return "sum_t n_step(t,x,a) != n(x,a) at (" + std::to_string(x) + ", " +
               std::to_string(a) + ")";
      }
    }
  }
  for (std::size_t t = 0; t < horizon_; ++t) {
    std::uint64_t per_step = 0;
    for (std::size_t x = 0; x < num_states_; ++x) {
      std::uint64_t marginal = 0;
      for (std::size_t a = 0; a < num_actions_; ++a) marginal += step_count(t, x, a);
      if (marginal != n_state_step_[t * num_states_ + x]) {
        return "state marginal mismatch at step " + std::to_string(t);
      }
      per_step += marginal;
    }
    if (per_step != episodes_) {
      return "sum_{x,a} n_step(t,x,a) != episodes at step " + std::to_string(t);
    }
  }
  return {};
}

std::string EmpiricalModel::to_json() const {
  nlohmann::json doc = {{"S", num_states_},   {"A", num_actions_}, {"H", horizon_},
                        {"episodes", episodes_}, {"n_sa", n_sa_},     {"n_say", n_say_},
                        {"n_step", n_step_}};
  return doc.dump();
}

EmpiricalModel EmpiricalModel::from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    EmpiricalModel model(doc.at("S").get<std::size_t>(), doc.at("A").get<std::size_t>(),
                         doc.at("H").get<std::size_t>());
    auto n_sa = doc.at("n_sa").get<std::vector<std::uint64_t>>();
    auto n_say = doc.at("n_say").get<std::vector<std::uint64_t>>();
    auto n_step = doc.at("n_step").get<std::vector<std::uint64_t>>();
    if (n_sa.size() != model.n_sa_.size() || n_say.size() != model.n_say_.size() ||
        n_step.size() != model.n_step_.size()) {
      throw std::invalid_argument("EmpiricalModel snapshot: count arrays have wrong sizes");
    }
    model.n_sa_ = std::move(n_sa);
    model.n_say_ = std::move(n_say);
    model.n_step_ = std::move(n_step);
    model.episodes_ = doc.at("episodes").get<std::uint64_t>();
    for (std::size_t t = 0; t < model.horizon_; ++t) {
      for (std::size_t x = 0; x < model.num_states_; ++x) {
        std::uint64_t marginal = 0;
        for (std::size_t a = 0; a < model.num_actions_; ++a) marginal += model.step_count(t, x, a);
        model.n_state_step_[t * model.num_states_ + x] = marginal;
      }
    }
    if (auto problem = model.check_consistency(); !problem.empty()) {
      throw std::invalid_argument("EmpiricalModel snapshot inconsistent: " + problem);
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("EmpiricalModel snapshot: ") + e.what());
  }
}

}  // namespace ucbvi
