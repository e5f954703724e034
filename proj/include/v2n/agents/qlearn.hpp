#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "v2n/agents/agent.hpp"
#include "v2n/agents/reward_transform.hpp"
#include "v2n/rng.hpp"

namespace v2n::agents {

struct QLearningConfig {
  double step_size = 0.1;
  double gamma = 0.99;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Steps over which epsilon decays linearly (0: stay at epsilon_start).
  std::size_t epsilon_decay_steps = 0;
  RewardTransform reward_transform = RewardTransform::kSymlog;
};

nlohmann::json to_json(const QLearningConfig& c);
QLearningConfig qlearning_config_from_json(const nlohmann::json& j, QLearningConfig base = {});

/// Tabular Q-learning restricted to the actions {-1, 0, +1}. The state is
/// (N, floor(W)) with the workload bin capped at n_max.
class QTableAgent : public Agent {
 public:
  static constexpr std::array<int, 3> kActions{-1, 0, 1};

  QTableAgent(QLearningConfig config, int n_max, Rng rng);

  std::string kind() const override { return "qlearn"; }
  int act(const Observation& obs) override;
  void observe(const Transition& transition) override;
  void set_training_horizon(std::size_t steps) override;
  nlohmann::json to_json() const override;
  static QTableAgent from_json(const nlohmann::json& j);

  /// Q(s,a) <- Q(s,a) + alpha (r + gamma max_a' Q(s',a') - Q(s,a)), the max
  /// taken over feasible a'.
  /// Throws std::invalid_argument unless the effective action is in {-1,0,1}.
  void update(const Transition& transition);

  double q(int n_active, double workload, int action) const;
  int workload_bin(double workload) const;
  /// Greedy action among those keeping 1 <= N + a <= n_max; ties prefer 0,
  /// then +1, then -1.
  int greedy(int n_active, double workload) const;
  /// max_a Q(s, a) over the same feasible actions as greedy().
  double value_of(int n_active, double workload) const;
  double epsilon() const;
  std::size_t steps() const { return steps_; }

 private:
  std::size_t index(int n_active, double workload) const;
  static std::size_t action_slot(int action);

  QLearningConfig config_;
  int n_max_;
  std::uint64_t seed_;  // as passed to the constructor
  Rng rng_;
  std::vector<std::array<double, 3>> table_;
  std::size_t steps_ = 0;
};

}  // namespace v2n::agents
