#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "v2n/neural/tensor.hpp"
#include "v2n/rng.hpp"

namespace v2n::neural {

struct LstmSpec {
  int input_dim = 1;
  int layers = 2;
  int cells_per_layer = 4;
  int output_dim = 1;  // linear head on the last layer's final hidden state

  void validate() const;
  std::size_t parameter_count() const;

  friend bool operator==(const LstmSpec&, const LstmSpec&) = default;
};

/// Per-layer, per-time-step activations kept for backpropagation through time.
struct LstmCache {
  const void* owner = nullptr;
  std::uint64_t version = 0;
  std::size_t steps = 0;
  // [layer][t]
  std::vector<std::vector<Tensor2D>> inputs;
  std::vector<std::vector<Tensor2D>> gates;  // B x 4H, post-nonlinearity, order i,f,g,o
  std::vector<std::vector<Tensor2D>> cells;  // c_t
  std::vector<std::vector<Tensor2D>> hidden;  // h_t
  Tensor2D final_hidden;
};

struct LstmGradients {
  std::vector<Tensor2D> params;  // same order as Lstm::parameters()
};

/// Stacked LSTM with a linear regression head.
///
/// Gates per layer: z = x W_x + h_{t-1} W_h + b split into (i, f, g, o);
/// c_t = sigmoid(f) c_{t-1} + sigmoid(i) tanh(g), h_t = sigmoid(o) tanh(c_t).
class Lstm {
 public:
  explicit Lstm(LstmSpec spec);
  /// Uniform(+-1/sqrt(cells)) initialization with forget-gate bias 1.
  Lstm(LstmSpec spec, Rng& rng);

  const LstmSpec& spec() const { return spec_; }

  /// `sequence[t]` is a B x input_dim batch; returns B x output_dim.
  Tensor2D forward(std::span<const Tensor2D> sequence) const;
  Tensor2D forward(std::span<const Tensor2D> sequence, LstmCache& cache) const;
  LstmGradients backward(const LstmCache& cache, const Tensor2D& grad_output) const;

  /// Order: per layer (W_x, W_h, b), then head (W, b). Mutable access
  /// invalidates outstanding caches.
  std::vector<Tensor2D*> parameters();
  std::vector<const Tensor2D*> parameters() const;
  std::size_t parameter_count() const;

 private:
  Tensor2D run(std::span<const Tensor2D> sequence, LstmCache* cache) const;

  LstmSpec spec_;
  std::vector<Tensor2D> w_input_;   // in x 4H
  std::vector<Tensor2D> w_hidden_;  // H x 4H
  std::vector<Tensor2D> bias_;      // 1 x 4H
  Tensor2D head_weight_;            // H x out
  Tensor2D head_bias_;              // 1 x out
  std::uint64_t version_ = 0;
};

}  // namespace v2n::neural
