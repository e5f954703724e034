#include "v2n/agents/ou_noise.hpp"

#include <cmath>

namespace v2n::agents {

double OrnsteinUhlenbeck::sample(Rng& rng) {
  x_ += theta_ * (mu_ - x_) * dt_ + sigma_ * std::sqrt(dt_) * rng.normal();
  return x_;
}

}  // namespace v2n::agents
