#include "v2n/harness/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace v2n::harness {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::pair<double, double> padded_range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12) return {lo - 0.5, hi + 0.5};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

std::array<Panel, 3> trace_panels(const RunMetrics& m) {
  std::vector<double> cpus(m.n_active.begin(), m.n_active.end());
  return {Panel{"Max CPU load", "load", {{m.agent, m.max_load}}},
          Panel{"Active CPUs", "N", {{m.agent, std::move(cpus)}}},
          Panel{"Reward", "reward", {{m.agent, m.reward}}}};
}

std::array<BarChart, 2> summary_bars(const std::vector<ComparisonRow>& rows) {
  BarChart cpus{"Average active CPUs", {}, {}, {}};
  BarChart reward{"Average reward", {}, {}, {}};
  for (const auto& r : rows) {
    cpus.labels.push_back(r.agent);
    cpus.values.push_back(r.cpus_mean);
    cpus.errors.push_back(r.cpus_std);
    reward.labels.push_back(r.agent);
    reward.values.push_back(r.reward_mean);
    reward.errors.push_back(r.reward_std);
  }
  return {std::move(cpus), std::move(reward)};
}

std::string render_svg(const std::vector<Panel>& panels, double width, double panel_height) {
  const double left = 70.0, right = 20.0, top = 30.0, bottom = 30.0;
  const double height = panel_height * static_cast<double>(panels.size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const auto& panel = panels[p];
    const double y0 = panel_height * static_cast<double>(p);
    const double pw = width - left - right;
    const double ph = panel_height - top - bottom;
    double lo = INFINITY, hi = -INFINITY;
    std::size_t len = 0;
    for (const auto& s : panel.series) {
      for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      len = std::max(len, s.values.size());
    }
    const auto [ylo, yhi] = padded_range(lo, hi);
    const double xscale = len > 1 ? pw / static_cast<double>(len - 1) : 0.0;
    auto px = [&](std::size_t i) { return left + xscale * static_cast<double>(i); };
    auto py = [&](double v) { return y0 + top + ph * (1.0 - (v - ylo) / (yhi - ylo)); };

    svg << "<g class=\"panel\">\n"
        << "<text x=\"" << num(left) << "\" y=\"" << num(y0 + 18) << "\" font-size=\"13\">"
        << escape(panel.title) << "</text>\n"
        << "<rect x=\"" << num(left) << "\" y=\"" << num(y0 + top) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n"
        << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y0 + top + 4)
        << "\" text-anchor=\"end\">" << tick(yhi) << "</text>\n"
        << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y0 + top + ph)
        << "\" text-anchor=\"end\">" << tick(ylo) << "</text>\n"
        << "<text x=\"14\" y=\"" << num(y0 + top + ph / 2) << "\" transform=\"rotate(-90 14 "
        << num(y0 + top + ph / 2) << ")\" text-anchor=\"middle\">" << escape(panel.y_label)
        << "</text>\n";
    for (std::size_t s = 0; s < panel.series.size(); ++s) {
      const auto& series = panel.series[s];
      const char* color = kPalette[s % std::size(kPalette)];
      svg << "<polyline class=\"series\" data-label=\"" << escape(series.label)
          << "\" data-points=\"" << series.values.size() << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (i) svg << ' ';
        svg << num(px(i)) << ',' << num(py(series.values[i]));
      }
      svg << "\"/>\n"
          << "<text x=\"" << num(width - right - 4) << "\" y=\""
          << num(y0 + top + 14 + 13 * static_cast<double>(s)) << "\" text-anchor=\"end\" fill=\""
          << color << "\">" << escape(series.label) << "</text>\n";
    }
    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(y0 + panel_height - 8)
        << "\" text-anchor=\"middle\">time slot</text>\n</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_svg(const BarChart& chart, double width, double height) {
  const double left = 70.0, right = 20.0, top = 30.0, bottom = 40.0;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < chart.values.size(); ++i) {
    const double e = i < chart.errors.size() ? chart.errors[i] : 0.0;
    lo = std::min(lo, chart.values[i] - e);
    hi = std::max(hi, chart.values[i] + e);
  }
  const auto [ylo, yhi] = padded_range(lo, hi);
  auto py = [&](double v) { return top + ph * (1.0 - (v - ylo) / (yhi - ylo)); };
  const double slot = chart.values.empty() ? pw : pw / static_cast<double>(chart.values.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
      << num(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << num(left) << "\" y=\"18\" font-size=\"13\">" << escape(chart.title)
      << "</text>\n"
      << "<line x1=\"" << num(left) << "\" x2=\"" << num(left + pw) << "\" y1=\"" << num(py(0))
      << "\" y2=\"" << num(py(0)) << "\" stroke=\"#444\"/>\n"
      << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + 4) << "\" text-anchor=\"end\">"
      << tick(yhi) << "</text>\n"
      << "<text x=\"" << num(left - 6) << "\" y=\"" << num(top + ph) << "\" text-anchor=\"end\">"
      << tick(ylo) << "</text>\n";
  for (std::size_t i = 0; i < chart.values.size(); ++i) {
    const double v = chart.values[i];
    const double x = left + slot * static_cast<double>(i) + 0.2 * slot;
    const double y = std::min(py(v), py(0));
    const double h = std::abs(py(v) - py(0));
    svg << "<rect class=\"bar\" data-label=\"" << escape(chart.labels[i]) << "\" data-value=\""
        << v << "\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(0.6 * slot)
        << "\" height=\"" << num(h) << "\" fill=\"" << kPalette[i % std::size(kPalette)]
        << "\"/>\n";
    if (i < chart.errors.size() && chart.errors[i] > 0.0) {
      const double cx = x + 0.3 * slot;
      svg << "<line x1=\"" << num(cx) << "\" x2=\"" << num(cx) << "\" y1=\""
          << num(py(v - chart.errors[i])) << "\" y2=\"" << num(py(v + chart.errors[i]))
          << "\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"" << num(x + 0.3 * slot) << "\" y=\"" << num(top + ph + 16)
        << "\" text-anchor=\"middle\">" << escape(chart.labels[i]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> emit_plots(const std::vector<ComparisonRow>& rows,
                                              const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  if (rows.empty()) return written;
  std::filesystem::create_directories(dir);
  for (const auto& row : rows) {
    if (row.runs.empty()) continue;
    const auto panels = trace_panels(row.runs.front());
    const auto path = dir / ("trace_" + row.agent + ".svg");
    write_file(path, render_svg(std::vector<Panel>(panels.begin(), panels.end())));
    written.push_back(path);
  }
  const auto bars = summary_bars(rows);
  const std::filesystem::path cpus = dir / "bar_cpus.svg";
  const std::filesystem::path reward = dir / "bar_reward.svg";
  write_file(cpus, render_svg(bars[0]));
  write_file(reward, render_svg(bars[1]));
  written.push_back(cpus);
  written.push_back(reward);
  return written;
}

}  // namespace v2n::harness
