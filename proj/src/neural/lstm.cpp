#include "v2n/neural/lstm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "v2n/errors.hpp"

namespace v2n::neural {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void LstmSpec::validate() const {
  if (input_dim < 1 || layers < 1 || cells_per_layer < 1 || output_dim < 1) {
    throw std::invalid_argument("LSTM dimensions must be >= 1");
  }
}

std::size_t LstmSpec::parameter_count() const {
  const std::size_t h = static_cast<std::size_t>(cells_per_layer);
  std::size_t total = 0;
  std::size_t in = static_cast<std::size_t>(input_dim);
  for (int l = 0; l < layers; ++l) {
    total += in * 4 * h + h * 4 * h + 4 * h;
    in = h;
  }
  return total + h * static_cast<std::size_t>(output_dim) + static_cast<std::size_t>(output_dim);
}

Lstm::Lstm(LstmSpec spec) : spec_(spec) {
  spec_.validate();
  const int h = spec_.cells_per_layer;
  int in = spec_.input_dim;
  for (int l = 0; l < spec_.layers; ++l) {
    w_input_.push_back(Tensor2D::Zero(in, 4 * h));
    w_hidden_.push_back(Tensor2D::Zero(h, 4 * h));
    bias_.push_back(Tensor2D::Zero(1, 4 * h));
    in = h;
  }
  head_weight_ = Tensor2D::Zero(h, spec_.output_dim);
  head_bias_ = Tensor2D::Zero(1, spec_.output_dim);
}

Lstm::Lstm(LstmSpec spec, Rng& rng) : Lstm(spec) {
  const int h = spec_.cells_per_layer;
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  for (int l = 0; l < spec_.layers; ++l) {
    for (auto& v : w_input_[l].reshaped()) v = rng.uniform(-bound, bound);
    for (auto& v : w_hidden_[l].reshaped()) v = rng.uniform(-bound, bound);
    for (auto& v : bias_[l].reshaped()) v = rng.uniform(-bound, bound);
    bias_[l].block(0, h, 1, h).setOnes();
  }
  for (auto& v : head_weight_.reshaped()) v = rng.uniform(-bound, bound);
  for (auto& v : head_bias_.reshaped()) v = rng.uniform(-bound, bound);
}

Tensor2D Lstm::forward(std::span<const Tensor2D> sequence) const {
  return run(sequence, nullptr);
}

Tensor2D Lstm::forward(std::span<const Tensor2D> sequence, LstmCache& cache) const {
  return run(sequence, &cache);
}

Tensor2D Lstm::run(std::span<const Tensor2D> sequence, LstmCache* cache) const {
  if (sequence.empty()) throw std::invalid_argument("LSTM sequence must be non-empty");
  const Eigen::Index batch = sequence[0].rows();
  for (const auto& x : sequence) {
    if (x.cols() != spec_.input_dim || x.rows() != batch) {
      throw ShapeError("LSTM input step has shape " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()));
    }
  }
  const int h = spec_.cells_per_layer;
  const auto steps = sequence.size();
  const auto n_layers = static_cast<std::size_t>(spec_.layers);
  if (cache) {
    cache->owner = this;
    cache->version = version_;
    cache->steps = steps;
    cache->inputs.assign(n_layers, std::vector<Tensor2D>(steps));
    cache->gates.assign(n_layers, std::vector<Tensor2D>(steps));
    cache->cells.assign(n_layers, std::vector<Tensor2D>(steps));
    cache->hidden.assign(n_layers, std::vector<Tensor2D>(steps));
  }

  std::vector<Tensor2D> layer_in(sequence.begin(), sequence.end());
  std::vector<Tensor2D> layer_out(steps);
  Tensor2D z(batch, 4 * h);
  for (std::size_t l = 0; l < n_layers; ++l) {
    Tensor2D hprev = Tensor2D::Zero(batch, h);
    Tensor2D cprev = Tensor2D::Zero(batch, h);
    for (std::size_t t = 0; t < steps; ++t) {
      z.noalias() = layer_in[t] * w_input_[l];
      z.noalias() += hprev * w_hidden_[l];
      z.rowwise() += bias_[l].row(0);
      Tensor2D gates(batch, 4 * h);
      gates.leftCols(2 * h) = z.leftCols(2 * h).unaryExpr(&sigmoid);
      gates.middleCols(2 * h, h) = z.middleCols(2 * h, h).array().tanh().matrix();
      gates.rightCols(h) = z.rightCols(h).unaryExpr(&sigmoid);
      Tensor2D c = (gates.middleCols(h, h).array() * cprev.array() +
                    gates.leftCols(h).array() * gates.middleCols(2 * h, h).array())
                       .matrix();
      Tensor2D hn = (gates.rightCols(h).array() * c.array().tanh()).matrix();
      if (cache) {
        cache->inputs[l][t] = layer_in[t];
        cache->gates[l][t] = gates;
        cache->cells[l][t] = c;
        cache->hidden[l][t] = hn;
      }
      cprev = std::move(c);
      hprev = hn;
      layer_out[t] = std::move(hn);
    }
    std::swap(layer_in, layer_out);
  }
  const Tensor2D& last = layer_in.back();
  if (cache) cache->final_hidden = last;
  Tensor2D y = last * head_weight_;
  y.rowwise() += head_bias_.row(0);
  return y;
}

LstmGradients Lstm::backward(const LstmCache& cache, const Tensor2D& grad_output) const {
  if (cache.owner != this || cache.version != version_ || cache.steps == 0 ||
      cache.gates.size() != static_cast<std::size_t>(spec_.layers)) {
    throw ShapeError("LSTM backward called with a stale or foreign cache");
  }
  const auto& hT = cache.final_hidden;
  if (grad_output.rows() != hT.rows() || grad_output.cols() != spec_.output_dim) {
    throw ShapeError("LSTM output gradient shape mismatch");
  }
  const int h = spec_.cells_per_layer;
  const auto steps = cache.steps;
  const auto n_layers = static_cast<std::size_t>(spec_.layers);
  const Eigen::Index batch = hT.rows();

  LstmGradients g;
  g.params.resize(3 * n_layers + 2);
  g.params[3 * n_layers] = hT.transpose() * grad_output;
  g.params[3 * n_layers + 1] = grad_output.colwise().sum();

  // Gradient flowing into each time step's hidden output from the layer above.
  std::vector<Tensor2D> dh_above(steps, Tensor2D::Zero(batch, h));
  dh_above.back() = grad_output * head_weight_.transpose();

  for (std::size_t l = n_layers; l-- > 0;) {
    Tensor2D dWx = Tensor2D::Zero(w_input_[l].rows(), w_input_[l].cols());
    Tensor2D dWh = Tensor2D::Zero(h, 4 * h);
    Tensor2D db = Tensor2D::Zero(1, 4 * h);
    Tensor2D dh_next = Tensor2D::Zero(batch, h);
    Tensor2D dc_next = Tensor2D::Zero(batch, h);
    std::vector<Tensor2D> dx(steps);
    Tensor2D dz(batch, 4 * h);
    for (std::size_t t = steps; t-- > 0;) {
      const auto& gates = cache.gates[l][t];
      const auto i = gates.leftCols(h).array();
      const auto f = gates.middleCols(h, h).array();
      const auto gg = gates.middleCols(2 * h, h).array();
      const auto o = gates.rightCols(h).array();
      const Tensor2D tanh_c = cache.cells[l][t].array().tanh().matrix();
      const Tensor2D c_prev =
          t == 0 ? Tensor2D::Zero(batch, h) : cache.cells[l][t - 1];
      const Tensor2D h_prev =
          t == 0 ? Tensor2D::Zero(batch, h) : cache.hidden[l][t - 1];

      const Tensor2D dh = dh_above[t] + dh_next;
      const Tensor2D dc =
          (dc_next.array() + dh.array() * o * (1.0 - tanh_c.array().square())).matrix();
      dz.leftCols(h) = (dc.array() * gg * i * (1.0 - i)).matrix();
      dz.middleCols(h, h) = (dc.array() * c_prev.array() * f * (1.0 - f)).matrix();
      dz.middleCols(2 * h, h) = (dc.array() * i * (1.0 - gg.square())).matrix();
      dz.rightCols(h) = (dh.array() * tanh_c.array() * o * (1.0 - o)).matrix();

      dWx.noalias() += cache.inputs[l][t].transpose() * dz;
      dWh.noalias() += h_prev.transpose() * dz;
      db += dz.colwise().sum();
      dx[t].noalias() = dz * w_input_[l].transpose();
      dh_next.noalias() = dz * w_hidden_[l].transpose();
      dc_next = (dc.array() * f).matrix();
    }
    g.params[3 * l] = std::move(dWx);
    g.params[3 * l + 1] = std::move(dWh);
    g.params[3 * l + 2] = std::move(db);
    dh_above = std::move(dx);
  }
  return g;
}

std::vector<Tensor2D*> Lstm::parameters() {
  ++version_;
  std::vector<Tensor2D*> out;
  for (std::size_t l = 0; l < w_input_.size(); ++l) {
    out.push_back(&w_input_[l]);
    out.push_back(&w_hidden_[l]);
    out.push_back(&bias_[l]);
  }
  out.push_back(&head_weight_);
  out.push_back(&head_bias_);
  return out;
}

std::vector<const Tensor2D*> Lstm::parameters() const {
  std::vector<const Tensor2D*> out;
  for (std::size_t l = 0; l < w_input_.size(); ++l) {
    out.push_back(&w_input_[l]);
    out.push_back(&w_hidden_[l]);
    out.push_back(&bias_[l]);
  }
  out.push_back(&head_weight_);
  out.push_back(&head_bias_);
  return out;
}

std::size_t Lstm::parameter_count() const {
  std::size_t total = 0;
  for (const auto* p : parameters()) total += static_cast<std::size_t>(p->size());
  return total;
}

}  // namespace v2n::neural
