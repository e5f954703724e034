#pragma once

#include <cstddef>
#include <string>

namespace v2n {

/// What a scaling policy sees before choosing an action.
struct Observation {
  std::size_t t = 0;      // index of `workload` in the driving series
  int n_active = 1;       // N_t
  double workload = 0.0;  // W_t
  double max_load = 0.0;  // most loaded CPU in the previous slot
  int n_max = 1;
  int action_limit = 1;
};

/// One environment transition as reported back to a learning policy.
struct Transition {
  Observation obs;
  int action = 0;            // as requested by the policy
  int effective_action = 0;  // after clamping into [1, n_max]
  double reward = 0.0;
  Observation next_obs;
  bool done = false;  // true only for terminal states; episode ends are truncations
};

/// Decision interface shared by every scaling strategy.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string name() const = 0;

  /// Returns an action in [-obs.action_limit, obs.action_limit].
  virtual int act(const Observation& obs) = 0;

  /// Called after every step while in training mode.
  virtual void observe(const Transition& /*transition*/) {}

  /// Clears per-episode memory (integrators, history windows, noise).
  virtual void begin_episode() {}

  void set_training(bool training) { training_ = training; }
  bool training() const { return training_; }

 private:
  bool training_ = false;
};

}  // namespace v2n
