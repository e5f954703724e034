#pragma once

#include <deque>
#include <span>
#include <vector>

#include "v2n/agents/agent.hpp"
#include "v2n/neural/adam.hpp"
#include "v2n/neural/lstm.hpp"
#include "v2n/rng.hpp"
#include "v2n/trace.hpp"

namespace v2n::agents {

struct LstmScalerConfig {
  neural::LstmSpec spec{1, 2, 4, 1};
  int lookback = 3;
  double headroom = 1.0;
  double learning_rate = 3e-3;
  int epochs = 30;
  int batch_size = 32;
};

nlohmann::json to_json(const LstmScalerConfig& c);
LstmScalerConfig lstm_scaler_config_from_json(const nlohmann::json& j,
                                              LstmScalerConfig base = {});

/// Provisions ceil(headroom * W_hat) CPUs, where W_hat is an LSTM forecast
/// of the next workload from the last `lookback` observations.
class LstmScaler : public Agent {
 public:
  LstmScaler(LstmScalerConfig config, int n_max, Rng rng);

  std::string kind() const override { return "lstm"; }
  int act(const Observation& obs) override;
  void begin_episode() override { history_.clear(); }
  nlohmann::json to_json() const override;
  static LstmScaler from_json(const nlohmann::json& j);

  /// Forecast in CPU units from a window of `lookback` workloads.
  double predict(std::span<const double> window) const;

  /// Supervised next-value regression (MSE on workloads scaled by 1/n_max)
  /// over all sliding windows. Returns the full-data MSE after each epoch.
  /// Throws std::invalid_argument when the series is not longer than lookback.
  std::vector<double> train(std::span<const double> series, int epochs);
  std::vector<double> train(const WorkloadSeries& series, int epochs) {
    return train(std::span<const double>(series.values), epochs);
  }

  /// MSE (in the scaled units) of the predictor over all windows of `series`.
  double evaluate_mse(std::span<const double> series) const;

  /// N* = max(1, ceil(headroom * predicted)); returns clamp(N* - N, +-limit).
  static int scaling_action(double predicted, double headroom, int n_active,
                            int action_limit);

  const LstmScalerConfig& config() const { return config_; }
  const neural::Lstm& predictor() const { return net_; }

 private:
  double scale() const { return static_cast<double>(n_max_); }

  LstmScalerConfig config_;
  int n_max_;
  std::uint64_t seed_;  // as passed to the constructor
  Rng rng_;
  neural::Lstm net_;
  neural::AdamState opt_;
  std::deque<double> history_;
};

}  // namespace v2n::agents
