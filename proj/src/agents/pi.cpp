#include "v2n/agents/pi.hpp"

#include <algorithm>
#include <cmath>

namespace v2n::agents {

nlohmann::json to_json(const PiConfig& c) {
  return {{"rho", c.rho}, {"kp", c.kp}, {"ki", c.ki}, {"integral_limit", c.integral_limit}};
}

PiConfig pi_config_from_json(const nlohmann::json& j, PiConfig c) {
  c.rho = j.value("rho", c.rho);
  c.kp = j.value("kp", c.kp);
  c.ki = j.value("ki", c.ki);
  c.integral_limit = j.value("integral_limit", c.integral_limit);
  return c;
}

PiController::PiController(PiConfig config) : config_(config) {}

int PiController::control(double max_load, int n_active, int action_limit) {
  const double e = max_load - config_.rho;
  integral_ = std::clamp(integral_ + e, -config_.integral_limit, config_.integral_limit);
  const double u = (config_.kp * e + config_.ki * integral_) * n_active;
  const double a = std::clamp(std::round(u), static_cast<double>(-action_limit),
                              static_cast<double>(action_limit));
  return static_cast<int>(a);
}

int PiController::act(const Observation& obs) {
  return control(obs.max_load, obs.n_active, obs.action_limit);
}

nlohmann::json PiController::to_json() const {
  return {{"kind", kind()}, {"config", agents::to_json(config_)}};
}

PiController PiController::from_json(const nlohmann::json& j) {
  return PiController(pi_config_from_json(j.at("config")));
}

}  // namespace v2n::agents
