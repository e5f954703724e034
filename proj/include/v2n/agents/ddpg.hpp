#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "v2n/agents/agent.hpp"
#include "v2n/agents/reward_transform.hpp"
#include "v2n/agents/dod.hpp"
#include "v2n/agents/ou_noise.hpp"
#include "v2n/agents/replay.hpp"
#include "v2n/neural/adam.hpp"
#include "v2n/neural/mlp.hpp"
#include "v2n/rng.hpp"

namespace v2n::agents {

struct DdpgConfig {
  std::vector<int> hidden{128, 128, 128};
  double actor_lr = 3e-3;
  double critic_lr = 3e-3;
  double gamma = 0.99;
  double tau = 0.005;
  std::size_t batch_size = 64;
  std::size_t replay_capacity = 100000;
  std::size_t warmup_steps = 1000;
  double ou_theta = 0.15;
  double ou_sigma = 0.2;
  double ou_sigma_final = 0.02;
  /// Steps over which sigma decays linearly to ou_sigma_final (0: no decay).
  std::size_t noise_decay_steps = 0;
  double final_layer_scale = 1e-3;
  double raw_lower = -1.0;
  double raw_upper = 1.0;
  RewardTransform reward_transform = RewardTransform::kSymlog;
  /// Multiplies the transformed reward before it enters replay.
  double reward_scale = 1.0;
  /// Weight of mean(z^2) on the actor's pre-tanh output; keeps the head out
  /// of saturation, where its gradient vanishes.
  double preact_penalty = 1.0;
};

nlohmann::json to_json(const DdpgConfig& c);
DdpgConfig ddpg_config_from_json(const nlohmann::json& j, DdpgConfig base = {});

/// DDPG actor-critic whose scalar actor output is turned into an integer
/// scaling action by DOD. DOD sits outside the gradient path: the critic
/// is trained on the raw (continuous) action.
class DdpgAgent : public Agent {
 public:
  struct Decision {
    double raw = 0.0;
    int action = 0;
  };
  struct UpdateStats {
    bool applied = false;
    double critic_loss = 0.0;
    double actor_objective = 0.0;  // mean Q(s, pi(s))
  };

  DdpgAgent(DdpgConfig config, int action_limit, int n_max, Rng rng);

  std::string kind() const override { return "ddpg"; }
  int act(const Observation& obs) override;
  void observe(const Transition& transition) override;
  void begin_episode() override;
  void set_training_horizon(std::size_t steps) override;
  nlohmann::json to_json() const override;
  static DdpgAgent from_json(const nlohmann::json& j);

  /// Actor output plus optional exploration, clamped to [l, u], then DOD.
  Decision decide(const Observation& obs, bool explore);
  double actor_output(const Observation& obs) const;

  /// One gradient step on a batch drawn from the replay buffer; a no-op
  /// (applied = false) while the buffer holds fewer than batch_size items.
  UpdateStats update();
  UpdateStats update(std::span<const ReplayItem> batch);
  /// r + gamma * (1 - done) * Q'(s', pi'(s')).
  std::vector<double> critic_targets(std::span<const ReplayItem> batch) const;
  double critic_value(const std::array<double, 2>& state, double raw) const;

  const DdpgConfig& config() const { return config_; }
  const DodConfig& dod_config() const { return dod_; }
  const neural::Mlp& actor() const { return actor_; }
  const neural::Mlp& critic() const { return critic_; }
  const neural::Mlp& target_actor() const { return target_actor_; }
  const neural::Mlp& target_critic() const { return target_critic_; }
  const ReplayBuffer& replay() const { return replay_; }
  std::size_t steps_observed() const { return steps_; }
  double noise_sigma() const { return noise_.sigma(); }

 private:
  DdpgConfig config_;
  DodConfig dod_;
  int n_max_;
  std::uint64_t seed_;  // as passed to the constructor
  Rng rng_;
  neural::Mlp actor_, critic_, target_actor_, target_critic_;
  neural::AdamState actor_opt_, critic_opt_;
  ReplayBuffer replay_;
  OrnsteinUhlenbeck noise_;
  std::size_t steps_ = 0;
  double last_raw_ = 0.0;
};

}  // namespace v2n::agents
