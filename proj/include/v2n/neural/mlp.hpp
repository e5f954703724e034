#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "v2n/neural/tensor.hpp"
#include "v2n/rng.hpp"

namespace v2n::neural {

enum class Activation { kIdentity, kElu, kTanh, kSoftmax };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

struct MlpSpec {
  int input_dim = 1;
  int output_dim = 1;
  std::vector<int> hidden;
  Activation hidden_activation = Activation::kElu;
  Activation output_activation = Activation::kIdentity;

  void validate() const;
  /// Sum over consecutive widths of w_i * w_{i+1} + w_{i+1}.
  std::size_t parameter_count() const;

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

/// Activation record of one forward pass; only valid for the network (and
/// parameter version) that produced it.
struct MlpCache {
  const void* owner = nullptr;
  std::uint64_t version = 0;
  std::vector<Tensor2D> inputs;       // input to each layer
  std::vector<Tensor2D> activations;  // output of each layer
  std::vector<Tensor2D> preacts;      // pre-activation of each layer
};

struct MlpGradients {
  std::vector<Tensor2D> params;  // same order as Mlp::parameters()
  Tensor2D input;
};

/// Fully connected network y = f_L(... f_1(x W_1 + b_1) ...).
class Mlp {
 public:
  /// All-zero parameters.
  explicit Mlp(MlpSpec spec);
  /// Uniform(+-1/sqrt(fan_in)) weights and biases; the last layer is then
  /// multiplied by `final_layer_scale`.
  Mlp(MlpSpec spec, Rng& rng, double final_layer_scale = 1.0);

  const MlpSpec& spec() const { return spec_; }
  std::size_t num_layers() const { return weights_.size(); }

  Tensor2D forward(const Tensor2D& input) const;
  Tensor2D forward(const Tensor2D& input, MlpCache& cache) const;

  /// `grad_output` is dLoss/dOutput (post output activation). With
  /// `param_grads` false only the input gradient is computed.
  MlpGradients backward(const MlpCache& cache, const Tensor2D& grad_output,
                        bool param_grads = true) const;
  /// `grad_preact` is dLoss/d(last pre-activation), e.g. softmax logits.
  MlpGradients backward_preactivation(const MlpCache& cache, const Tensor2D& grad_preact,
                                      bool param_grads = true) const;

  /// Mutable access invalidates outstanding caches.
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
  std::size_t parameter_count() const;

  const Tensor2D& weight(std::size_t layer) const { return weights_[layer]; }
  const Tensor2D& bias(std::size_t layer) const { return biases_[layer]; }

  /// theta <- tau * source + (1 - tau) * theta.
  void soft_update_from(const Mlp& source, double tau);

  std::uint64_t version() const { return version_; }

 private:
  void check_input(const Tensor2D& input) const;
  MlpGradients backward_impl(const MlpCache& cache, Tensor2D delta, bool param_grads) const;

  MlpSpec spec_;
  std::vector<Tensor2D> weights_;  // fan_in x fan_out
  std::vector<Tensor2D> biases_;   // 1 x fan_out
  std::uint64_t version_ = 0;
};

void apply_activation(Activation a, const Tensor2D& z, Tensor2D& out);

}  // namespace v2n::neural
