#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>

#include <json.hpp>

#include "v2n/policy.hpp"

namespace v2n::agents {

/// A Policy that can be checkpointed and told how long training will run.
class Agent : public Policy {
 public:
  /// Registry key: ddpg, a2c, qlearn, pi, lstm or oracle.
  virtual std::string kind() const = 0;
  std::string name() const override { return kind(); }

  /// Full learned state plus configuration; exploration noise is excluded.
  virtual nlohmann::json to_json() const = 0;

  /// Total environment steps the harness is about to train for; exploration
  /// schedules anneal over this horizon.
  virtual void set_training_horizon(std::size_t /*steps*/) {}
};

/// Observation scaled into roughly [0, 1]: (N / n_max, W / n_max).
inline std::array<double, 2> normalize(const Observation& obs) {
  const double scale = static_cast<double>(obs.n_max);
  return {obs.n_active / scale, obs.workload / scale};
}

}  // namespace v2n::agents
