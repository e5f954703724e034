#include "v2n/neural/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "v2n/errors.hpp"

namespace v2n::neural {

double relative_error(double analytic, double numeric, double floor) {
  const double scale = std::max({std::fabs(analytic), std::fabs(numeric), floor});
  return std::fabs(analytic - numeric) / scale;
}

GradCheckResult gradient_check(std::span<Tensor2D* const> params,
                               std::span<const Tensor2D> analytic,
                               const std::function<double()>& loss, double h) {
  if (params.size() != analytic.size()) throw ShapeError("gradient list length mismatch");
  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor2D& p = *params[k];
    if (p.rows() != analytic[k].rows() || p.cols() != analytic[k].cols()) {
      throw ShapeError("gradient " + std::to_string(k) + " shape mismatch");
    }
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      double& v = p.data()[i];
      const double saved = v;
      v = saved + h;
      const double up = loss();
      v = saved - h;
      const double down = loss();
      v = saved;
      const double numeric = (up - down) / (2.0 * h);
      result.max_relative_error = std::max(
          result.max_relative_error, relative_error(analytic[k].data()[i], numeric));
      ++result.checked;
    }
  }
  return result;
}

namespace {

Tensor2D random_tensor(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = -1.0,
                       double hi = 1.0) {
  Tensor2D t(rows, cols);
  for (auto& v : t.reshaped()) v = rng.uniform(lo, hi);
  return t;
}

}  // namespace

GradCheckResult check_mlp(const MlpSpec& spec, std::uint64_t seed, int batch, double h) {
  Rng rng(seed);
  Mlp net(spec, rng);
  Tensor2D input = random_tensor(batch, spec.input_dim, rng);
  const Tensor2D weights = random_tensor(batch, spec.output_dim, rng);

  MlpCache cache;
  net.forward(input, cache);
  const MlpGradients grads = net.backward(cache, weights);

  const auto loss = [&] { return net.forward(input).cwiseProduct(weights).sum(); };
  // Probing writes through raw pointers; the analytic pass is already done.
  auto params = net.parameters();
  params.push_back(&input);
  std::vector<Tensor2D> analytic = grads.params;
  analytic.push_back(grads.input);
  return gradient_check(params, analytic, loss, h);
}

GradCheckResult check_lstm(const LstmSpec& spec, std::uint64_t seed, int steps, int batch,
                           double h) {
  Rng rng(seed);
  Lstm net(spec, rng);
  std::vector<Tensor2D> seq;
  for (int t = 0; t < steps; ++t) seq.push_back(random_tensor(batch, spec.input_dim, rng));
  const Tensor2D weights = random_tensor(batch, spec.output_dim, rng);

  LstmCache cache;
  net.forward(seq, cache);
  const LstmGradients grads = net.backward(cache, weights);

  const auto loss = [&] { return net.forward(seq).cwiseProduct(weights).sum(); };
  const auto params = net.parameters();
  return gradient_check(params, grads.params, loss, h);
}

}  // namespace v2n::neural

namespace v2n::neural {

std::vector<NamedCheck> standard_gradient_suite(std::uint64_t seed) {
  const std::vector<int> hidden{128, 128, 128};
  std::vector<NamedCheck> out;
  out.push_back({"mlp-elu-identity",
                 check_mlp({2, 1, hidden, Activation::kElu, Activation::kIdentity}, seed)});
  out.push_back({"mlp-elu-tanh",
                 check_mlp({2, 1, hidden, Activation::kElu, Activation::kTanh}, seed + 1)});
  out.push_back({"mlp-elu-softmax",
                 check_mlp({2, 11, hidden, Activation::kElu, Activation::kSoftmax}, seed + 2)});
  out.push_back({"lstm-2x4", check_lstm({1, 2, 4, 1}, seed + 3)});
  return out;
}

}  // namespace v2n::neural
