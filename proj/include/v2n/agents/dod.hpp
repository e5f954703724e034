#pragma once

namespace v2n::agents {

/// Deterministic Ordered Discretization: maps a real actor output in
/// [lower, upper] onto the ordered integer actions {-n_max, ..., n_max}.
struct DodConfig {
  double lower = -1.0;
  double upper = 1.0;
  int n_max = 5;

  void validate() const;
};

/// Positive affine map of [lower, upper] onto [-n_max, n_max].
double dod_affine(double raw, const DodConfig& config);

/// Nearest action to dod_affine(raw); exact half-way points go to the lower
/// action. Inputs outside [lower, upper] are clamped first.
int dod(double raw, const DodConfig& config);

/// Raw value whose affine image is exactly `action`.
double dod_preimage_centre(int action, const DodConfig& config);

}  // namespace v2n::agents
