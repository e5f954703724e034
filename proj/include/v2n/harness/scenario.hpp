#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2n/simenv.hpp"
#include "v2n/trace.hpp"

namespace v2n::harness {

/// Where the vehicle-count trace comes from.
struct TraceSource {
  enum class Kind { kSynthetic, kFile };
  Kind kind = Kind::kSynthetic;
  int days = 35;
  std::uint64_t seed = 2020;
  SyntheticProfile profile;
  std::string path;
  TraceFormat format;
  double vehicles_per_cpu = 8.0;
};

struct Scenario {
  std::string name = "performance";
  EnvConfig env;
  TraceSource trace;
  double train_fraction = 0.8;
  std::size_t episode_length = kSlotsPerDay;
  /// Training episodes start from N drawn uniformly in [1, n_max] instead of
  /// env.initial_cpus, so every CPU count is visited with an empty backlog.
  bool random_start_cpus = true;
  /// Training budget per agent kind: episodes, or epochs for "lstm".
  std::map<std::string, int> episodes{{"ddpg", 200}, {"a2c", 200}, {"qlearn", 2000},
                                      {"lstm", 30},  {"pi", 0},    {"oracle", 0}};
  /// Evaluation window, relative to the start of the test split.
  std::size_t eval_offset = 0;
  std::size_t eval_length = 2 * kSlotsPerDay;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  /// Per-kind hyperparameter overrides, e.g. {"ddpg": {"tau": 0.01}}.
  nlohmann::json agent_overrides = nlohmann::json::object();

  int episodes_for(const std::string& kind) const;
  nlohmann::json overrides_for(const std::string& kind) const;
  void validate() const;
};

nlohmann::json to_json(const Scenario& s);
/// Keys missing from `j` keep the value from `base`.
Scenario scenario_from_json(const nlohmann::json& j, Scenario base = {});

/// Two-day evaluation with A = {-5..5}.
Scenario performance_scenario();
/// Same trace and budget with A = {-limit..limit}.
Scenario scalability_scenario(int action_limit);

struct Dataset {
  WorkloadSeries full;
  WorkloadSeries train;
  WorkloadSeries test;
};

Dataset build_dataset(const Scenario& scenario);

/// Evaluation window in test-split indices; throws std::out_of_range when
/// it does not fit (each step also needs the following value).
Window eval_window(const Scenario& scenario, const Dataset& data);
Window checked_test_window(const Dataset& data, std::size_t begin, std::size_t end);

}  // namespace v2n::harness
