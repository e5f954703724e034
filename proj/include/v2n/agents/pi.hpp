#pragma once

#include "v2n/agents/agent.hpp"

namespace v2n::agents {

struct PiConfig {
  double rho = 0.6;  // target load of the most loaded CPU
  double kp = 2.5;
  double ki = 0.1;
  double integral_limit = 5.0;
};

nlohmann::json to_json(const PiConfig& c);
PiConfig pi_config_from_json(const nlohmann::json& j, PiConfig base = {});

/// Proportional-integral controller on the most loaded CPU's utilization.
/// The control output is scaled by N so that gains act on relative capacity.
class PiController : public Agent {
 public:
  explicit PiController(PiConfig config = {});

  std::string kind() const override { return "pi"; }
  int act(const Observation& obs) override;
  void begin_episode() override { integral_ = 0.0; }
  nlohmann::json to_json() const override;
  static PiController from_json(const nlohmann::json& j);

  /// e = max_load - rho; I <- clamp(I + e); a = round(kp e N + ki I N),
  /// clamped to [-action_limit, action_limit].
  int control(double max_load, int n_active, int action_limit);

  double integral() const { return integral_; }
  const PiConfig& config() const { return config_; }

 private:
  PiConfig config_;
  double integral_ = 0.0;
};

}  // namespace v2n::agents
