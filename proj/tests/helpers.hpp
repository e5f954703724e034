#pragma once

#include <string>
#include <vector>

#include "v2n/policy.hpp"
#include "v2n/trace.hpp"

namespace v2n::testing {

/// Always requests the same action.
class ConstantPolicy : public Policy {
 public:
  explicit ConstantPolicy(int action) : action_(action) {}
  std::string name() const override { return "constant"; }
  int act(const Observation&) override { return action_; }
  void observe(const Transition& tr) override { seen.push_back(tr); }

  std::vector<Transition> seen;

 private:
  int action_;
};

inline WorkloadSeries flat_series(std::size_t n, double w) {
  WorkloadSeries s;
  s.values.assign(n, w);
  return s;
}

}  // namespace v2n::testing
