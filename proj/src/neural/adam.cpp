#include "v2n/neural/adam.hpp"

#include <cmath>
#include <string>

#include "v2n/errors.hpp"

namespace v2n::neural {

void adam_step(std::span<Tensor2D* const> params, std::span<const Tensor2D> grads,
               AdamState& state) {
  if (params.size() != grads.size()) {
    throw ShapeError("adam: " + std::to_string(params.size()) + " parameters but " +
                     std::to_string(grads.size()) + " gradients");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (params[k]->rows() != grads[k].rows() || params[k]->cols() != grads[k].cols()) {
      throw ShapeError("adam: gradient " + std::to_string(k) + " shape mismatch");
    }
  }
  if (state.first_moment.empty()) {
    for (const auto* p : params) {
      state.first_moment.push_back(Tensor2D::Zero(p->rows(), p->cols()));
      state.second_moment.push_back(Tensor2D::Zero(p->rows(), p->cols()));
    }
  } else if (state.first_moment.size() != params.size()) {
    throw ShapeError("adam: optimizer state tracks a different parameter list");
  }

  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = state.first_moment[k];
    auto& v = state.second_moment[k];
    if (m.rows() != grads[k].rows() || m.cols() != grads[k].cols()) {
      throw ShapeError("adam: moment buffer " + std::to_string(k) + " shape mismatch");
    }
    const auto& g = grads[k];
    m = state.beta1 * m + (1.0 - state.beta1) * g;
    v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
    params[k]->array() -= state.learning_rate * (m.array() / c1) /
                          ((v.array() / c2).sqrt() + state.epsilon);
  }
}

}  // namespace v2n::neural
