#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "v2n/agents/agent.hpp"
#include "v2n/harness/scenario.hpp"
#include "v2n/simenv.hpp"

namespace v2n::harness {

struct TrainResult {
  std::unique_ptr<agents::Agent> agent;
  /// Mean reward per training episode; per-epoch MSE for the LSTM scaler.
  std::vector<double> learning_curve;
  std::vector<std::string> warnings;
  double wall_clock = 0.0;
};

/// Compatibility notes for running `kind` under `scenario` (empty when none).
std::vector<std::string> compatibility_warnings(const std::string& kind,
                                                const Scenario& scenario);

/// Fresh agent for `kind` with the scenario's overrides, seeded as train() does.
std::unique_ptr<agents::Agent> make_scenario_agent(const std::string& kind,
                                                   const Scenario& scenario,
                                                   std::uint64_t seed);

/// Episodic training on the train split: each episode is a uniformly drawn
/// day of `episode_length` steps starting from a fresh environment.
TrainResult train(const std::string& kind, const Scenario& scenario, const Dataset& data,
                  std::uint64_t seed);

struct RunMetrics {
  std::string agent;
  std::uint64_t seed = 0;
  Window window;
  double avg_active_cpus = 0.0;
  double avg_reward = 0.0;
  std::vector<double> max_load;
  std::vector<int> n_active;
  std::vector<double> reward;
  double wall_clock = 0.0;
  EpisodeLog log;
};

/// One continuous frozen-mode rollout over `window` of the test split.
RunMetrics evaluate(agents::Agent& agent, const Scenario& scenario, const Dataset& data,
                    Window window, std::uint64_t seed);

struct ComparisonRow {
  std::string agent;
  std::vector<RunMetrics> runs;  // one per seed, in scenario order
  double cpus_mean = 0.0;
  double cpus_std = 0.0;
  double reward_mean = 0.0;
  double reward_std = 0.0;
};

/// Sample mean and standard deviation (n - 1 denominator, 0 for n = 1).
std::pair<double, double> mean_std(const std::vector<double>& xs);
ComparisonRow summarize(std::string agent, std::vector<RunMetrics> runs);

struct RunArtifacts {
  TrainResult trained;
  RunMetrics metrics;
};

/// train() followed by evaluate() on the scenario's evaluation window.
RunArtifacts run(const std::string& kind, const Scenario& scenario, const Dataset& data,
                 std::uint64_t seed);

/// Trains and evaluates every (agent, seed) pair. When `out_root` is not
/// empty each run is written below it and summary.csv plus plots are emitted.
std::vector<ComparisonRow> compare(const Scenario& scenario, const Dataset& data,
                                   const std::vector<std::string>& kinds,
                                   const std::filesystem::path& out_root = {});

}  // namespace v2n::harness
