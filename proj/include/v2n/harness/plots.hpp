#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "v2n/harness/runner.hpp"

namespace v2n::harness {

struct PlotSeries {
  std::string label;
  std::vector<double> values;
};

struct Panel {
  std::string title;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Max CPU load, active CPUs and reward over the evaluation window.
std::array<Panel, 3> trace_panels(const RunMetrics& m);

struct BarChart {
  std::string title;
  std::vector<std::string> labels;
  std::vector<double> values;
  std::vector<double> errors;
};

/// Average active CPUs and average reward per agent, with std error bars.
std::array<BarChart, 2> summary_bars(const std::vector<ComparisonRow>& rows);

std::string render_svg(const std::vector<Panel>& panels, double width = 900.0,
                       double panel_height = 220.0);
std::string render_svg(const BarChart& chart, double width = 600.0, double height = 360.0);

/// Writes trace_<agent>.svg (first seed) for every row plus bar_cpus.svg
/// and bar_reward.svg. Returns the files written; none for empty input.
std::vector<std::filesystem::path> emit_plots(const std::vector<ComparisonRow>& rows,
                                              const std::filesystem::path& dir);

}  // namespace v2n::harness
