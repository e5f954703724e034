#include "v2n/agents/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace v2n::agents {

int ClairvoyantPolicy::act(const Observation& obs) {
  if (obs.t + 1 >= series_.size()) {
    throw std::logic_error("clairvoyant policy is not bound to the driving series");
  }
  const int need = std::max(1, static_cast<int>(std::ceil(series_[obs.t + 1])));
  return std::clamp(need - obs.n_active, -obs.action_limit, obs.action_limit);
}

}  // namespace v2n::agents
