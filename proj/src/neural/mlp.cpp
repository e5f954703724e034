#include "v2n/neural/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "v2n/errors.hpp"

namespace v2n::neural {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kElu: return "elu";
    case Activation::kTanh: return "tanh";
    case Activation::kSoftmax: return "softmax";
  }
  return "identity";
}

Activation activation_from_string(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "elu") return Activation::kElu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "softmax") return Activation::kSoftmax;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1) throw std::invalid_argument("MLP dims must be >= 1");
  for (int w : hidden) {
    if (w < 1) throw std::invalid_argument("MLP hidden widths must be >= 1");
  }
  if (hidden_activation == Activation::kSoftmax) {
    throw std::invalid_argument("softmax is only supported as an output activation");
  }
}

std::size_t MlpSpec::parameter_count() const {
  std::size_t total = 0;
  int fan_in = input_dim;
  auto add = [&](int fan_out) {
    total += static_cast<std::size_t>(fan_in) * fan_out + fan_out;
    fan_in = fan_out;
  };
  for (int w : hidden) add(w);
  add(output_dim);
  return total;
}

void apply_activation(Activation a, const Tensor2D& z, Tensor2D& out) {
  switch (a) {
    case Activation::kIdentity:
      out = z;
      return;
    case Activation::kElu:
      out = (z.array() > 0.0).select(z.array(), z.array().min(0.0).exp() - 1.0).matrix();
      return;
    case Activation::kTanh:
      out = z.array().tanh().matrix();
      return;
    case Activation::kSoftmax: {
      out.resize(z.rows(), z.cols());
      for (Eigen::Index r = 0; r < z.rows(); ++r) {
        const double m = z.row(r).maxCoeff();
        out.row(r) = (z.row(r).array() - m).exp().matrix();
        out.row(r) /= out.row(r).sum();
      }
      return;
    }
  }
}

namespace {

// dL/dz from dL/da for an elementwise (or row-wise softmax) activation.
Tensor2D activation_backward(Activation act, const Tensor2D& z, const Tensor2D& a,
                             const Tensor2D& grad) {
  switch (act) {
    case Activation::kIdentity:
      return grad;
    case Activation::kElu:
      // d/dz expm1(z) = exp(z) = a + 1 on the negative branch.
      return (z.array() > 0.0)
          .select(grad.array(), grad.array() * z.array().min(0.0).exp())
          .matrix();
    case Activation::kTanh:
      return (grad.array() * (1.0 - a.array().square())).matrix();
    case Activation::kSoftmax: {
      Tensor2D out(grad.rows(), grad.cols());
      for (Eigen::Index r = 0; r < grad.rows(); ++r) {
        const double dot = grad.row(r).dot(a.row(r));
        out.row(r) = (a.row(r).array() * (grad.row(r).array() - dot)).matrix();
      }
      return out;
    }
  }
  return grad;
}

}  // namespace

Mlp::Mlp(MlpSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  int fan_in = spec_.input_dim;
  auto add = [&](int fan_out) {
    weights_.push_back(Tensor2D::Zero(fan_in, fan_out));
    biases_.push_back(Tensor2D::Zero(1, fan_out));
    fan_in = fan_out;
  };
  for (int w : spec_.hidden) add(w);
  add(spec_.output_dim);
}

Mlp::Mlp(MlpSpec spec, Rng& rng, double final_layer_scale) : Mlp(std::move(spec)) {
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(weights_[l].rows()));
    const double scale = l + 1 == weights_.size() ? final_layer_scale : 1.0;
    for (auto& v : weights_[l].reshaped()) v = scale * rng.uniform(-bound, bound);
    for (auto& v : biases_[l].reshaped()) v = scale * rng.uniform(-bound, bound);
  }
}

void Mlp::check_input(const Tensor2D& input) const {
  if (input.cols() != spec_.input_dim) {
    throw ShapeError("MLP expects " + std::to_string(spec_.input_dim) +
                     " input columns, got " + std::to_string(input.cols()));
  }
}

Tensor2D Mlp::forward(const Tensor2D& input) const {
  check_input(input);
  Tensor2D x = input;
  Tensor2D z;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    z.noalias() = x * weights_[l];
    z.rowwise() += biases_[l].row(0);
    const auto act = l + 1 == weights_.size() ? spec_.output_activation
                                              : spec_.hidden_activation;
    apply_activation(act, z, x);
  }
  return x;
}

Tensor2D Mlp::forward(const Tensor2D& input, MlpCache& cache) const {
  check_input(input);
  const auto n = weights_.size();
  cache.owner = this;
  cache.version = version_;
  cache.inputs.resize(n);
  cache.activations.resize(n);
  cache.preacts.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    cache.inputs[l] = l == 0 ? input : cache.activations[l - 1];
    auto& z = cache.preacts[l];
    z.noalias() = cache.inputs[l] * weights_[l];
    z.rowwise() += biases_[l].row(0);
    const auto act = l + 1 == n ? spec_.output_activation : spec_.hidden_activation;
    apply_activation(act, z, cache.activations[l]);
  }
  return cache.activations.back();
}

MlpGradients Mlp::backward(const MlpCache& cache, const Tensor2D& grad_output,
                           bool param_grads) const {
  if (cache.owner != this || cache.version != version_ ||
      cache.activations.size() != weights_.size()) {
    throw ShapeError("MLP backward called with a stale or foreign cache");
  }
  const auto& out = cache.activations.back();
  if (grad_output.rows() != out.rows() || grad_output.cols() != out.cols()) {
    throw ShapeError("MLP output gradient shape mismatch");
  }
  return backward_impl(cache, activation_backward(spec_.output_activation,
                                                  cache.preacts.back(), out, grad_output),
                      param_grads);
}

MlpGradients Mlp::backward_preactivation(const MlpCache& cache,
                                         const Tensor2D& grad_preact,
                                         bool param_grads) const {
  if (cache.owner != this || cache.version != version_ ||
      cache.activations.size() != weights_.size()) {
    throw ShapeError("MLP backward called with a stale or foreign cache");
  }
  const auto& z = cache.preacts.back();
  if (grad_preact.rows() != z.rows() || grad_preact.cols() != z.cols()) {
    throw ShapeError("MLP pre-activation gradient shape mismatch");
  }
  return backward_impl(cache, grad_preact, param_grads);
}

MlpGradients Mlp::backward_impl(const MlpCache& cache, Tensor2D delta,
                                 bool param_grads) const {
  const auto n = weights_.size();
  MlpGradients g;
  if (param_grads) g.params.resize(2 * n);
  for (std::size_t l = n; l-- > 0;) {
    if (param_grads) {
      g.params[2 * l].noalias() = cache.inputs[l].transpose() * delta;
      g.params[2 * l + 1] = delta.colwise().sum();
    }
    Tensor2D upstream;
    upstream.noalias() = delta * weights_[l].transpose();
    if (l == 0) {
      g.input = std::move(upstream);
    } else {
      delta = activation_backward(spec_.hidden_activation, cache.preacts[l - 1],
                                  cache.activations[l - 1], upstream);
    }
  }
  return g;
}

std::vector<Tensor2D*> Mlp::parameters() {
  ++version_;
  std::vector<Tensor2D*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

std::vector<const Tensor2D*> Mlp::parameters() const {
  std::vector<const Tensor2D*> out;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    out.push_back(&weights_[l]);
    out.push_back(&biases_[l]);
  }
  return out;
}

std::size_t Mlp::parameter_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    total += static_cast<std::size_t>(weights_[l].size() + biases_[l].size());
  }
  return total;
}

void Mlp::soft_update_from(const Mlp& source, double tau) {
  if (!(source.spec_ == spec_)) throw ShapeError("soft update between different specs");
  ++version_;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    weights_[l] = tau * source.weights_[l] + (1.0 - tau) * weights_[l];
    biases_[l] = tau * source.biases_[l] + (1.0 - tau) * biases_[l];
  }
}

}  // namespace v2n::neural
