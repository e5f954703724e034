#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "v2n/harness/runner.hpp"

namespace v2n::harness {

inline constexpr const char* kResultsEnv = "V2N_RESULTS_DIR";

/// $V2N_RESULTS_DIR if set and non-empty, else `fallback`.
std::filesystem::path results_root(const std::filesystem::path& fallback = "results");

/// <root>/<scenario>/<agent>/<seed>
std::filesystem::path run_dir(const std::filesystem::path& root, const std::string& scenario,
                              const std::string& agent, std::uint64_t seed);

/// Single-row CSV of the summary metrics. Wall-clock time is left out so
/// repeated runs produce identical files.
void write_metrics_csv(std::ostream& out, const Scenario& scenario, const RunMetrics& m);
void write_learning_curve_csv(std::ostream& out, const std::string& kind,
                              const std::vector<double>& curve);
void write_summary_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Checkpoint document: scenario, seed and agent state.
nlohmann::json checkpoint_json(const Scenario& scenario, std::uint64_t seed,
                               const agents::Agent& agent);

/// Writes metrics.csv, trace.csv, learning_curve.csv, checkpoint.json and
/// timing.json into the run directory and returns it.
std::filesystem::path write_run(const std::filesystem::path& root, const Scenario& scenario,
                                const RunArtifacts& run);

}  // namespace v2n::harness
