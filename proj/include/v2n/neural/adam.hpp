#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "v2n/neural/tensor.hpp"

namespace v2n::neural {

/// Bias-corrected Adam. Moment buffers are sized on the first step.
struct AdamState {
  double learning_rate = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step_count = 0;
  std::vector<Tensor2D> first_moment;
  std::vector<Tensor2D> second_moment;
};

/// Applies one update in place. Throws ShapeError when `grads` does not
/// shape-match `params` (or the moment buffers from earlier steps).
void adam_step(std::span<Tensor2D* const> params, std::span<const Tensor2D> grads,
               AdamState& state);

}  // namespace v2n::neural
