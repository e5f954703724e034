#pragma once

#include <vector>

#include "v2n/agents/agent.hpp"

namespace v2n::agents {

/// Reference policy that reads the next slot's workload from the driving
/// series and provisions ceil(W_{t+1}) CPUs. Not realizable in practice;
/// used as an upper bound in comparisons.
class ClairvoyantPolicy : public Agent {
 public:
  ClairvoyantPolicy() = default;
  explicit ClairvoyantPolicy(std::vector<double> series) : series_(std::move(series)) {}

  std::string kind() const override { return "oracle"; }
  int act(const Observation& obs) override;
  nlohmann::json to_json() const override { return {{"kind", kind()}}; }

  /// Binds the series whose indices Observation::t refers to.
  void bind(std::vector<double> series) { series_ = std::move(series); }

 private:
  std::vector<double> series_;
};

}  // namespace v2n::agents
