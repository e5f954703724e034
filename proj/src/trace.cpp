#include "v2n/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "v2n/errors.hpp"
#include "v2n/rng.hpp"

namespace v2n {

TraceSeries::TraceSeries(std::vector<TracePoint> points, std::int64_t bin_seconds)
    : points_(std::move(points)), bin_seconds_(bin_seconds) {
  if (bin_seconds_ <= 0) throw ValidationError("bin_seconds must be positive");
  if (points_.empty()) throw ValidationError("trace is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double v = points_[i].vehicles;
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("point " + std::to_string(i) +
                            ": vehicle count must be finite and non-negative");
    }
    if (i > 0 && points_[i].timestamp - points_[i - 1].timestamp != bin_seconds_) {
      throw ValidationError("point " + std::to_string(i) + ": timestamp " +
                            std::to_string(points_[i].timestamp) + " is not " +
                            std::to_string(bin_seconds_) + " s after its predecessor");
    }
  }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.remove_suffix(1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line, const char* what) {
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError(line, std::string("cannot parse ") + what + " from '" +
                               std::string(field) + "'");
  }
  return value;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

TraceSeries parse_trace(const std::string& text, const TraceFormat& format) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  long ts_col = -1, veh_col = -1;
  std::size_t n_cols = 0;
  std::vector<TracePoint> rows;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (ts_col < 0) {
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == format.timestamp_column) ts_col = static_cast<long>(c);
        if (fields[c] == format.vehicles_column) veh_col = static_cast<long>(c);
      }
      if (ts_col < 0 || veh_col < 0) {
        throw ParseError(line_no, "header must name columns '" +
                                      format.timestamp_column + "' and '" +
                                      format.vehicles_column + "'");
      }
      n_cols = fields.size();
      continue;
    }
    if (fields.size() != n_cols) {
      throw ParseError(line_no, "expected " + std::to_string(n_cols) +
                                    " fields, found " + std::to_string(fields.size()));
    }
    TracePoint p;
    p.timestamp = parse_number<std::int64_t>(fields[ts_col], line_no, "timestamp");
    p.vehicles = parse_number<double>(fields[veh_col], line_no, "vehicle count");
    if (!std::isfinite(p.vehicles) || p.vehicles < 0.0) {
      throw ParseError(line_no, "vehicle count must be finite and non-negative");
    }
    if (!rows.empty()) {
      const auto prev = rows.back().timestamp;
      if (p.timestamp <= prev) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": timestamps must be strictly increasing");
      }
      const auto gap = p.timestamp - prev;
      if (gap != format.bin_seconds) {
        if (format.gap_fill == GapFill::kReject || gap % format.bin_seconds != 0) {
          throw ValidationError("line " + std::to_string(line_no) + ": gap of " +
                                std::to_string(gap) + " s");
        }
        const auto missing = gap / format.bin_seconds - 1;
        const double v0 = rows.back().vehicles;
        for (std::int64_t k = 1; k <= missing; ++k) {
          const double frac = static_cast<double>(k) / static_cast<double>(missing + 1);
          rows.push_back({prev + k * format.bin_seconds, v0 + frac * (p.vehicles - v0)});
        }
      }
    }
    rows.push_back(p);
  }
  if (ts_col < 0) throw ParseError(line_no, "missing header");
  if (rows.empty()) throw ValidationError("trace has no data rows");
  return TraceSeries(std::move(rows), format.bin_seconds);
}

TraceSeries load_trace(const std::filesystem::path& path, const TraceFormat& format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), format);
}

std::string format_trace(const TraceSeries& trace) {
  std::string out = "timestamp,vehicles\n";
  for (const auto& p : trace.points()) {
    out += std::to_string(p.timestamp);
    out += ',';
    out += shortest(p.vehicles);
    out += '\n';
  }
  return out;
}

void write_trace(const std::filesystem::path& path, const TraceSeries& trace) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << format_trace(trace);
}

double daily_shape(double hour, const SyntheticProfile& profile) {
  auto bump = [hour](double centre, double width) {
    // Wrap around midnight so the shape is continuous across days.
    double d = std::fabs(hour - centre);
    d = std::min(d, 24.0 - d);
    return std::exp(-0.5 * (d / width) * (d / width));
  };
  const double v = bump(profile.morning_peak_hour, profile.morning_width_hours) +
                   profile.evening_height *
                       bump(profile.evening_peak_hour, profile.evening_width_hours);
  return std::clamp(v, 0.0, 1.0);
}

TraceSeries generate_synthetic(int days, std::uint64_t seed,
                               const SyntheticProfile& profile) {
  if (days < 1) throw std::invalid_argument("days must be >= 1");
  Rng rng = Rng(seed).split("synthetic-trace");
  const std::size_t n = static_cast<std::size_t>(days) * kSlotsPerDay;
  std::vector<TracePoint> points;
  points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t ts =
        profile.start_timestamp + static_cast<std::int64_t>(i) * kDefaultBinSeconds;
    const std::int64_t day_index = ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
    const double hour = static_cast<double>(ts - day_index * 86400) / 3600.0;
    // 1970-01-01 was a Thursday; 0 = Sunday, 6 = Saturday.
    const auto weekday = ((day_index + 4) % 7 + 7) % 7;
    const bool weekend = weekday == 0 || weekday == 6;
    const double daily = profile.amplitude * daily_shape(hour, profile);
    const double weekly = weekend ? -profile.weekend_drop * daily : 0.0;
    const double mean = profile.base + daily + weekly;
    // Draw unconditionally so the stream layout does not depend on the profile.
    const double z = rng.normal();
    const double noise = profile.noise_fraction * mean * z;
    points.push_back({ts, std::max(0.0, mean + noise)});
  }
  return TraceSeries(std::move(points), kDefaultBinSeconds);
}

WorkloadSeries to_workload(const TraceSeries& trace, double vehicles_per_cpu) {
  if (!(vehicles_per_cpu > 0.0)) {
    throw std::invalid_argument("vehicles_per_cpu must be positive");
  }
  WorkloadSeries w;
  w.values.reserve(trace.size());
  for (const auto& p : trace.points()) w.values.push_back(p.vehicles / vehicles_per_cpu);
  w.start_timestamp = trace[0].timestamp;
  w.bin_seconds = trace.bin_seconds();
  return w;
}

std::pair<WorkloadSeries, WorkloadSeries> split(const WorkloadSeries& series,
                                                double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  const auto cut = static_cast<std::size_t>(
      std::floor(static_cast<double>(series.size()) * train_fraction));
  if (cut == 0 || cut >= series.size()) {
    throw std::invalid_argument("split of " + std::to_string(series.size()) +
                                " values at fraction " + shortest(train_fraction) +
                                " leaves an empty partition");
  }
  WorkloadSeries head, tail;
  head.values.assign(series.values.begin(), series.values.begin() + cut);
  tail.values.assign(series.values.begin() + cut, series.values.end());
  head.bin_seconds = tail.bin_seconds = series.bin_seconds;
  head.start_timestamp = series.start_timestamp;
  tail.start_timestamp =
      series.start_timestamp + static_cast<std::int64_t>(cut) * series.bin_seconds;
  head.offset = series.offset;
  tail.offset = series.offset + cut;
  return {std::move(head), std::move(tail)};
}

}  // namespace v2n
