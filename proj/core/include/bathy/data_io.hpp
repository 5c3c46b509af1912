#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bathy/grid.hpp"
#include "bathy/objective.hpp"
#include "bathy/spline.hpp"
#include "bathy/swe_forward.hpp"

namespace bathy {

struct TimeSeries {
  std::vector<double> times;   // s, strictly increasing
  std::vector<double> values;  // m
  std::string label;

  std::size_t size() const { return times.size(); }
  /// Throws UsageError on length mismatch, non-monotone times or non-finite data.
  void validate() const;
  SampledCurve curve() const { return SampledCurve(times, values); }
};

struct ColumnSpec {
  std::string time = "time_s";
  std::string value = "elevation_m";
};

/// Reads one sensor record. Every data row becomes a sample; any malformed,
/// non-finite or non-increasing row is a ParseError naming its line.
TimeSeries load_sensor_series(const std::filesystem::path& path, const ColumnSpec& columns = {});
void write_sensor_series(const std::filesystem::path& path, const TimeSeries& ts);

/// Repeated runs of one experiment on a shared time axis.
struct RunEnsemble {
  std::vector<TimeSeries> runs;

  int n() const { return static_cast<int>(runs.size()); }
  void validate() const;
};

/// Manifest: CSV with a `path` column; relative paths resolve against the
/// manifest's directory.
RunEnsemble load_ensemble(const std::filesystem::path& manifest, const ColumnSpec& columns = {});

/// Tabulated bathymetry (`x_m,b_m`) as a natural cubic spline in x.
SampledCurve load_bathymetry_table(const std::filesystem::path& path);
void write_bathymetry(const std::filesystem::path& path, const Grid& grid, const Bathymetry& b);

/// Surface elevation on collocation nodes at a list of times.
struct FullFieldObservation {
  Field nodes;
  std::vector<double> times;
  SpaceTimeField H;  // times.size() x nodes.size()
};

/// Header `t_s,x_0,...,x_{M-1}`; the first data row holds node coordinates
/// (its time cell is written as `nan` and ignored on read).
FullFieldObservation load_full_field(const std::filesystem::path& path);
void write_full_field(const std::filesystem::path& path, const FullFieldObservation& obs);

enum class ObservationMode { FullField, Sensors };

struct ObservationSet {
  ObservationMode mode = ObservationMode::FullField;
  std::optional<FullFieldObservation> full_field;
  std::optional<std::vector<TimeSeries>> sensor_series;
  std::optional<SensorLayout> layout;

  /// Exactly the members of the active mode are present and consistent.
  void validate() const;
};

/// Resamples onto `target` nodes (full field only) and onto t_n = n dt,
/// n = 0..T/dt (both modes). Time resampling uses natural cubic splines.
ObservationSet resample_observation(const ObservationSet& obs, const Grid& target, double dt,
                                    double T);

/// Half the largest peak-to-trough range over nodes or sensors.
double observed_amplitude(const ObservationSet& obs);

inline constexpr std::string_view kNoiseGenerator = "mt19937_64/normal_distribution";

/// Adds N(0, (fraction * A)^2) to every sample, A = observed_amplitude(obs).
ObservationSet add_noise(const ObservationSet& obs, double fraction, std::uint64_t seed);

/// Data misfit for an observation already resampled onto `grid` and the
/// trajectory time axis. In sensor mode `selected` picks series by index
/// (all when empty).
DataMisfit make_misfit(const ObservationSet& aligned, std::shared_ptr<const Grid> grid,
                       const std::vector<std::size_t>& selected = {});

}  // namespace bathy
