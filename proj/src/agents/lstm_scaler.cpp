#include "v2n/agents/lstm_scaler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "v2n/neural/checkpoint.hpp"

namespace v2n::agents {

using neural::Tensor2D;

nlohmann::json to_json(const LstmScalerConfig& c) {
  return {{"spec", neural::to_json(c.spec)},
          {"lookback", c.lookback},
          {"headroom", c.headroom},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size}};
}

LstmScalerConfig lstm_scaler_config_from_json(const nlohmann::json& j, LstmScalerConfig c) {
  if (j.contains("spec")) c.spec = neural::lstm_spec_from_json(j.at("spec"));
  c.lookback = j.value("lookback", c.lookback);
  c.headroom = j.value("headroom", c.headroom);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  return c;
}

LstmScaler::LstmScaler(LstmScalerConfig config, int n_max, Rng rng)
    : config_(config), n_max_(n_max), seed_(rng.seed()), rng_(rng), net_(config.spec) {
  if (config_.lookback < 1) throw std::invalid_argument("lookback must be >= 1");
  if (config_.spec.input_dim != 1 || config_.spec.output_dim != 1) {
    throw std::invalid_argument("LSTM scaler needs a univariate predictor");
  }
  Rng init = rng_.split("init");
  net_ = neural::Lstm(config_.spec, init);
  opt_.learning_rate = config_.learning_rate;
  rng_ = rng_.split("run");
}

double LstmScaler::predict(std::span<const double> window) const {
  if (window.size() != static_cast<std::size_t>(config_.lookback)) {
    throw std::invalid_argument("prediction window must hold lookback values");
  }
  std::vector<Tensor2D> seq;
  seq.reserve(window.size());
  for (double w : window) seq.push_back(Tensor2D::Constant(1, 1, w / scale()));
  return net_.forward(seq)(0, 0) * scale();
}

int LstmScaler::scaling_action(double predicted, double headroom, int n_active,
                               int action_limit) {
  const double need = std::ceil(headroom * std::max(predicted, 0.0));
  const double target = std::max(1.0, need);
  const double a = std::clamp(target - n_active, static_cast<double>(-action_limit),
                              static_cast<double>(action_limit));
  return static_cast<int>(a);
}

int LstmScaler::act(const Observation& obs) {
  if (history_.empty()) history_.assign(static_cast<std::size_t>(config_.lookback), obs.workload);
  else {
    history_.push_back(obs.workload);
    while (history_.size() > static_cast<std::size_t>(config_.lookback)) history_.pop_front();
  }
  const std::vector<double> window(history_.begin(), history_.end());
  return scaling_action(predict(window), config_.headroom, obs.n_active, obs.action_limit);
}

namespace {

// Builds the lookback-major batch for the given window start positions.
std::vector<Tensor2D> window_batch(std::span<const double> series,
                                   std::span<const std::size_t> starts, int lookback,
                                   double inv_scale, Tensor2D* targets) {
  const auto b = static_cast<Eigen::Index>(starts.size());
  std::vector<Tensor2D> seq(static_cast<std::size_t>(lookback), Tensor2D(b, 1));
  if (targets) targets->resize(b, 1);
  for (Eigen::Index i = 0; i < b; ++i) {
    const std::size_t s = starts[static_cast<std::size_t>(i)];
    for (int k = 0; k < lookback; ++k) {
      seq[static_cast<std::size_t>(k)](i, 0) = series[s + static_cast<std::size_t>(k)] * inv_scale;
    }
    if (targets) (*targets)(i, 0) = series[s + static_cast<std::size_t>(lookback)] * inv_scale;
  }
  return seq;
}

}  // namespace

double LstmScaler::evaluate_mse(std::span<const double> series) const {
  const auto lb = static_cast<std::size_t>(config_.lookback);
  if (series.size() <= lb) throw std::invalid_argument("series too short for lookback");
  std::vector<std::size_t> starts(series.size() - lb);
  std::iota(starts.begin(), starts.end(), std::size_t{0});
  Tensor2D y;
  const auto seq = window_batch(series, starts, config_.lookback, 1.0 / scale(), &y);
  const Tensor2D pred = net_.forward(seq);
  return (pred - y).squaredNorm() / static_cast<double>(y.rows());
}

std::vector<double> LstmScaler::train(std::span<const double> series, int epochs) {
  const auto lb = static_cast<std::size_t>(config_.lookback);
  if (series.size() <= lb) {
    throw std::invalid_argument("training series of length " + std::to_string(series.size()) +
                                " is too short for lookback " + std::to_string(lb));
  }
  std::vector<std::size_t> order(series.size() - lb);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(std::max(1, config_.batch_size));
  std::vector<double> curve;
  for (int e = 0; e < epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng_.engine());
    for (std::size_t from = 0; from < order.size(); from += batch) {
      const std::size_t to = std::min(order.size(), from + batch);
      const std::span<const std::size_t> starts(order.data() + from, to - from);
      Tensor2D y;
      const auto seq = window_batch(series, starts, config_.lookback, 1.0 / scale(), &y);
      neural::LstmCache cache;
      const Tensor2D pred = net_.forward(seq, cache);
      const Tensor2D grad = 2.0 * (pred - y) / static_cast<double>(y.rows());
      const auto g = net_.backward(cache, grad);
      neural::adam_step(net_.parameters(), g.params, opt_);
    }
    curve.push_back(evaluate_mse(series));
  }
  return curve;
}

nlohmann::json LstmScaler::to_json() const {
  return {{"kind", kind()},
          {"config", agents::to_json(config_)},
          {"n_max", n_max_},
          {"normalization", {{"workload", 1.0 / n_max_}}},
          {"rng_seed", seed_},
          {"predictor", neural::to_json(net_)}};
}

LstmScaler LstmScaler::from_json(const nlohmann::json& j) {
  LstmScaler s(lstm_scaler_config_from_json(j.at("config")), j.at("n_max").get<int>(),
               Rng(j.at("rng_seed").get<std::uint64_t>()));
  s.net_ = neural::lstm_from_json(j.at("predictor"));
  return s;
}

}  // namespace v2n::agents
