#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2n/agents/agent.hpp"
#include "v2n/rng.hpp"

namespace v2n::agents {

const std::vector<std::string>& agent_kinds();

/// Builds a fresh agent. `overrides` holds hyperparameters for that agent
/// kind (keys as in its config's JSON form). Throws std::invalid_argument
/// for an unknown kind.
std::unique_ptr<Agent> make_agent(const std::string& kind, int action_limit, int n_max,
                                  const nlohmann::json& overrides, Rng rng);

/// Restores an agent from Agent::to_json output.
std::unique_ptr<Agent> agent_from_json(const nlohmann::json& j);

}  // namespace v2n::agents
