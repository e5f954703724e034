#pragma once

#include "v2n/rng.hpp"

namespace v2n::agents {

/// Ornstein-Uhlenbeck process x += theta (mu - x) dt + sigma sqrt(dt) N(0,1).
class OrnsteinUhlenbeck {
 public:
  OrnsteinUhlenbeck(double theta = 0.15, double sigma = 0.2, double dt = 1.0,
                    double mu = 0.0)
      : theta_(theta), sigma_(sigma), dt_(dt), mu_(mu), x_(mu) {}

  double sample(Rng& rng);
  void reset() { x_ = mu_; }

  void set_sigma(double sigma) { sigma_ = sigma; }
  double sigma() const { return sigma_; }
  double value() const { return x_; }

 private:
  double theta_, sigma_, dt_, mu_;
  double x_;
};

}  // namespace v2n::agents
