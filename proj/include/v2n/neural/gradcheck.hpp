#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "v2n/neural/lstm.hpp"
#include "v2n/neural/mlp.hpp"
#include "v2n/neural/tensor.hpp"

namespace v2n::neural {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
};

/// |a - n| / max(|a|, |n|, floor). The floor keeps entries whose true
/// gradient is ~0 from dominating through finite-difference round-off.
double relative_error(double analytic, double numeric, double floor = 1e-6);

/// Compares `analytic` against central differences of `loss` over every
/// entry of every tensor in `params`. `loss` must read the current values
/// of `params`; each entry is restored after probing.
GradCheckResult gradient_check(std::span<Tensor2D* const> params,
                               std::span<const Tensor2D> analytic,
                               const std::function<double()>& loss, double h = 1e-5);

/// Random MLP with the given spec, random batch and a random linear
/// functional of the outputs as loss. Also checks the input gradient.
GradCheckResult check_mlp(const MlpSpec& spec, std::uint64_t seed, int batch = 3,
                          double h = 1e-5);

/// Same for an LSTM over a random sequence of `steps` inputs.
GradCheckResult check_lstm(const LstmSpec& spec, std::uint64_t seed, int steps = 3,
                           int batch = 2, double h = 1e-5);

}  // namespace v2n::neural

namespace v2n::neural {

struct NamedCheck {
  std::string name;
  GradCheckResult result;
};

/// Three-layer 128-wide ELU MLPs with identity, tanh and softmax heads and
/// a 2-layer, 4-cell LSTM.
std::vector<NamedCheck> standard_gradient_suite(std::uint64_t seed = 1);

}  // namespace v2n::neural
