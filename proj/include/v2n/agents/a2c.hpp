#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "v2n/agents/agent.hpp"
#include "v2n/agents/reward_transform.hpp"
#include "v2n/neural/adam.hpp"
#include "v2n/neural/mlp.hpp"
#include "v2n/rng.hpp"

namespace v2n::agents {

struct A2cConfig {
  std::vector<int> hidden{128, 128, 128};
  double actor_lr = 3e-3;
  double critic_lr = 3e-3;
  double gamma = 0.99;
  double entropy_weight = 0.01;
  /// Transitions collected before each update.
  std::size_t segment_length = 5;
  RewardTransform reward_transform = RewardTransform::kSymlog;
};

nlohmann::json to_json(const A2cConfig& c);
A2cConfig a2c_config_from_json(const nlohmann::json& j, A2cConfig base = {});

struct A2cStep {
  std::array<double, 2> state{};
  int action_index = 0;  // 0 .. 2*limit, i.e. action + limit
  double reward = 0.0;
  std::array<double, 2> next_state{};
  bool done = false;
};

/// Advantage actor-critic over the discrete action set {-limit..limit}
/// with a softmax actor and one-step TD advantages.
class A2cAgent : public Agent {
 public:
  struct UpdateStats {
    double actor_loss = 0.0;
    double critic_loss = 0.0;
    double mean_advantage = 0.0;
    double mean_entropy = 0.0;
  };

  A2cAgent(A2cConfig config, int action_limit, int n_max, Rng rng);

  std::string kind() const override { return "a2c"; }
  /// Samples from pi(.|s) in training mode, otherwise takes the argmax.
  int act(const Observation& obs) override;
  void observe(const Transition& transition) override;
  void begin_episode() override;
  nlohmann::json to_json() const override;
  static A2cAgent from_json(const nlohmann::json& j);

  std::vector<double> probabilities(const std::array<double, 2>& state) const;
  double value(const std::array<double, 2>& state) const;

  /// Critic regression to r + gamma V(s'); actor descends
  /// -A log pi(a|s) - entropy_weight * H(pi(.|s)).
  UpdateStats update(std::span<const A2cStep> segment);

  int action_limit() const { return action_limit_; }
  int num_actions() const { return 2 * action_limit_ + 1; }
  const A2cConfig& config() const { return config_; }
  const neural::Mlp& actor() const { return actor_; }
  const neural::Mlp& critic() const { return critic_; }

 private:
  A2cConfig config_;
  int action_limit_;
  int n_max_;
  std::uint64_t seed_;  // as passed to the constructor
  Rng rng_;
  neural::Mlp actor_, critic_;
  neural::AdamState actor_opt_, critic_opt_;
  std::vector<A2cStep> pending_;
  int last_index_ = 0;
};

}  // namespace v2n::agents
