#include "v2n/agents/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace v2n::agents {

nlohmann::json to_json(const QLearningConfig& c) {
  return {{"step_size", c.step_size},
          {"gamma", c.gamma},
          {"epsilon_start", c.epsilon_start},
          {"epsilon_end", c.epsilon_end},
          {"epsilon_decay_steps", c.epsilon_decay_steps},
          {"reward_transform", to_string(c.reward_transform)}};
}

QLearningConfig qlearning_config_from_json(const nlohmann::json& j, QLearningConfig c) {
  c.step_size = j.value("step_size", c.step_size);
  c.gamma = j.value("gamma", c.gamma);
  c.epsilon_start = j.value("epsilon_start", c.epsilon_start);
  c.epsilon_end = j.value("epsilon_end", c.epsilon_end);
  c.epsilon_decay_steps = j.value("epsilon_decay_steps", c.epsilon_decay_steps);
  if (j.contains("reward_transform")) {
    c.reward_transform = reward_transform_from_string(j.at("reward_transform").get<std::string>());
  }
  return c;
}

QTableAgent::QTableAgent(QLearningConfig config, int n_max, Rng rng)
    : config_(config),
      n_max_(n_max),
      seed_(rng.seed()),
      rng_(rng.split("run")),
      table_(static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(n_max + 1),
             std::array<double, 3>{0.0, 0.0, 0.0}) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
}

int QTableAgent::workload_bin(double workload) const {
  if (!(workload > 0.0)) return 0;
  return static_cast<int>(std::min(std::floor(workload), static_cast<double>(n_max_)));
}

std::size_t QTableAgent::index(int n_active, double workload) const {
  const int n = std::clamp(n_active, 0, n_max_);
  return static_cast<std::size_t>(n) * static_cast<std::size_t>(n_max_ + 1) +
         static_cast<std::size_t>(workload_bin(workload));
}

std::size_t QTableAgent::action_slot(int action) {
  if (action < -1 || action > 1) {
    throw std::invalid_argument("Q-learning action " + std::to_string(action) +
                                " outside {-1, 0, 1}");
  }
  return static_cast<std::size_t>(action + 1);
}

double QTableAgent::q(int n_active, double workload, int action) const {
  return table_[index(n_active, workload)][action_slot(action)];
}

int QTableAgent::greedy(int n_active, double workload) const {
  const auto& row = table_[index(n_active, workload)];
  int best = 0;
  for (int a : {1, -1}) {
    // Actions that would leave [1, n_max] are clamped to 0 and never get
    // their own update, so they are not candidates.
    const int n = n_active + a;
    if (n < 1 || n > n_max_) continue;
    if (row[action_slot(a)] > row[action_slot(best)]) best = a;
  }
  return best;
}

double QTableAgent::value_of(int n_active, double workload) const {
  return q(n_active, workload, greedy(n_active, workload));
}

double QTableAgent::epsilon() const {
  if (config_.epsilon_decay_steps == 0) return config_.epsilon_start;
  const double frac = std::min(
      1.0, static_cast<double>(steps_) / static_cast<double>(config_.epsilon_decay_steps));
  return config_.epsilon_start + frac * (config_.epsilon_end - config_.epsilon_start);
}

int QTableAgent::act(const Observation& obs) {
  if (training() && rng_.uniform() < epsilon()) {
    return kActions[static_cast<std::size_t>(rng_.integer(0, 2))];
  }
  return greedy(obs.n_active, obs.workload);
}

void QTableAgent::update(const Transition& tr) {
  const auto slot = action_slot(tr.effective_action);
  const double best_next =
      tr.done ? 0.0 : value_of(tr.next_obs.n_active, tr.next_obs.workload);
  double& value = table_[index(tr.obs.n_active, tr.obs.workload)][slot];
  value += config_.step_size * (transform_reward(config_.reward_transform, tr.reward) + config_.gamma * best_next - value);
}

void QTableAgent::observe(const Transition& tr) {
  update(tr);
  ++steps_;
}

void QTableAgent::set_training_horizon(std::size_t steps) {
  config_.epsilon_decay_steps = steps;
}

nlohmann::json QTableAgent::to_json() const {
  std::vector<double> flat;
  flat.reserve(table_.size() * 3);
  for (const auto& row : table_) flat.insert(flat.end(), row.begin(), row.end());
  return {{"kind", kind()},
          {"config", agents::to_json(config_)},
          {"n_max", n_max_},
          {"rng_seed", seed_},
          {"steps", steps_},
          {"table", std::move(flat)}};
}

QTableAgent QTableAgent::from_json(const nlohmann::json& j) {
  QTableAgent a(qlearning_config_from_json(j.at("config")), j.at("n_max").get<int>(),
                Rng(j.at("rng_seed").get<std::uint64_t>()));
  const auto flat = j.at("table").get<std::vector<double>>();
  if (flat.size() != a.table_.size() * 3) throw std::invalid_argument("Q-table size mismatch");
  for (std::size_t i = 0; i < a.table_.size(); ++i) {
    a.table_[i] = {flat[3 * i], flat[3 * i + 1], flat[3 * i + 2]};
  }
  a.steps_ = j.at("steps").get<std::size_t>();
  return a;
}

}  // namespace v2n::agents
