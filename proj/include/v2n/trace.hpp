#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace v2n {

inline constexpr std::int64_t kDefaultBinSeconds = 300;
inline constexpr std::size_t kSlotsPerDay = 288;

/// Vehicle count observed in one measurement bin.
struct TracePoint {
  std::int64_t timestamp = 0;  // seconds since epoch
  double vehicles = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Regularly binned vehicle-count series.
class TraceSeries {
 public:
  /// Validates: non-empty, vehicles finite and >= 0, timestamps spaced by
  /// exactly `bin_seconds`. Throws ValidationError otherwise.
  TraceSeries(std::vector<TracePoint> points,
              std::int64_t bin_seconds = kDefaultBinSeconds);

  const std::vector<TracePoint>& points() const { return points_; }
  std::int64_t bin_seconds() const { return bin_seconds_; }
  std::size_t size() const { return points_.size(); }
  const TracePoint& operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const TraceSeries&, const TraceSeries&) = default;

 private:
  std::vector<TracePoint> points_;
  std::int64_t bin_seconds_;
};

/// CPU-unit workload W_t derived from a trace.
struct WorkloadSeries {
  std::vector<double> values;
  /// First timestamp and bin width of the source trace.
  std::int64_t start_timestamp = 0;
  std::int64_t bin_seconds = kDefaultBinSeconds;
  /// Index of values[0] within the unsplit series.
  std::size_t offset = 0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }

  friend bool operator==(const WorkloadSeries&, const WorkloadSeries&) = default;
};

enum class GapFill { kReject, kLinear };

/// Column mapping and repair policy for CSV ingestion.
struct TraceFormat {
  std::string timestamp_column = "timestamp";
  std::string vehicles_column = "vehicles";
  std::int64_t bin_seconds = kDefaultBinSeconds;
  GapFill gap_fill = GapFill::kReject;
};

/// Shape of the synthetic vehicle-count generator.
///
/// vehicles(t) = max(0, base + amplitude*daily(t) + weekly(t) + noise(t)),
/// where daily() has a morning and an evening rush peak, weekly() attenuates
/// the rush on weekends and noise is Gaussian with standard deviation
/// noise_fraction times the noiseless mean.
struct SyntheticProfile {
  double base = 40.0;
  double amplitude = 160.0;
  double noise_fraction = 0.10;
  double weekend_drop = 0.35;
  double morning_peak_hour = 8.0;
  double morning_width_hours = 1.5;
  double evening_peak_hour = 17.5;
  double evening_width_hours = 2.0;
  double evening_height = 0.85;
  /// 2020-01-01T00:00:00Z.
  std::int64_t start_timestamp = 1577836800;

  friend bool operator==(const SyntheticProfile&, const SyntheticProfile&) = default;
};

TraceSeries load_trace(const std::filesystem::path& path,
                       const TraceFormat& format = {});
TraceSeries parse_trace(const std::string& text, const TraceFormat& format = {});

/// Canonical CSV: header `timestamp,vehicles`, shortest round-trip numbers.
std::string format_trace(const TraceSeries& trace);
void write_trace(const std::filesystem::path& path, const TraceSeries& trace);

/// Two-peak rush-hour shape in [0, 1] for a time of day in hours.
double daily_shape(double hour, const SyntheticProfile& profile);

TraceSeries generate_synthetic(int days, std::uint64_t seed,
                               const SyntheticProfile& profile = {});

WorkloadSeries to_workload(const TraceSeries& trace,
                           double vehicles_per_cpu = 8.0);

/// Contiguous prefix/suffix split at floor(size * train_fraction).
std::pair<WorkloadSeries, WorkloadSeries> split(const WorkloadSeries& series,
                                                double train_fraction);

}  // namespace v2n
