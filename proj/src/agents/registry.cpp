#include "v2n/agents/registry.hpp"

#include <stdexcept>

#include "v2n/agents/a2c.hpp"
#include "v2n/agents/ddpg.hpp"
#include "v2n/agents/lstm_scaler.hpp"
#include "v2n/agents/oracle.hpp"
#include "v2n/agents/pi.hpp"
#include "v2n/agents/qlearn.hpp"

namespace v2n::agents {

const std::vector<std::string>& agent_kinds() {
  static const std::vector<std::string> kinds{"ddpg", "a2c", "qlearn", "pi", "lstm", "oracle"};
  return kinds;
}

std::unique_ptr<Agent> make_agent(const std::string& kind, int action_limit, int n_max,
                                  const nlohmann::json& overrides, Rng rng) {
  const nlohmann::json& o = overrides.is_object() ? overrides : nlohmann::json::object();
  if (kind == "ddpg") {
    return std::make_unique<DdpgAgent>(ddpg_config_from_json(o), action_limit, n_max, rng);
  }
  if (kind == "a2c") {
    return std::make_unique<A2cAgent>(a2c_config_from_json(o), action_limit, n_max, rng);
  }
  if (kind == "qlearn") {
    return std::make_unique<QTableAgent>(qlearning_config_from_json(o), n_max, rng);
  }
  if (kind == "pi") return std::make_unique<PiController>(pi_config_from_json(o));
  if (kind == "lstm") {
    return std::make_unique<LstmScaler>(lstm_scaler_config_from_json(o), n_max, rng);
  }
  if (kind == "oracle") return std::make_unique<ClairvoyantPolicy>();
  throw std::invalid_argument("unknown agent kind '" + kind + "'");
}

std::unique_ptr<Agent> agent_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "ddpg") return std::make_unique<DdpgAgent>(DdpgAgent::from_json(j));
  if (kind == "a2c") return std::make_unique<A2cAgent>(A2cAgent::from_json(j));
  if (kind == "qlearn") return std::make_unique<QTableAgent>(QTableAgent::from_json(j));
  if (kind == "pi") return std::make_unique<PiController>(PiController::from_json(j));
  if (kind == "lstm") return std::make_unique<LstmScaler>(LstmScaler::from_json(j));
  if (kind == "oracle") return std::make_unique<ClairvoyantPolicy>();
  throw std::invalid_argument("unknown agent kind '" + kind + "' in checkpoint");
}

}  // namespace v2n::agents
