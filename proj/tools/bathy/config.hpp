#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bathy/objective.hpp"
#include "bathy/optimizer.hpp"
#include "bathy/swe_forward.hpp"

namespace bathy::cli {

enum class TwinMode { Both, FullField, Sensors };
enum class ObservationKind { FullField, Sensors };

/// Flat `key = value` run configuration. Every key is optional and falls
/// back to the defaults below; unknown keys are errors.
struct RunConfig {
  double L = 1.5;
  double R = 15.0;
  int M = 68;
  double dt = 1e-3;
  double T = 10.0;

  PhysParams physics;
  ObjectiveWeights weights;

  std::vector<int> sensor_ids;
  std::vector<double> sensor_positions;
  double sensor_variance = 0.045;

  OptimizerConfig optimizer;

  int fine_M = 100;
  double fine_dt = 5e-5;
  double noise_fraction = 0.0;
  std::uint64_t seed = 0;
  TwinMode twin_mode = TwinMode::Both;

  ObservationKind observation = ObservationKind::Sensors;

  std::filesystem::path forcing;
  std::filesystem::path reference_bathymetry;
  std::filesystem::path observation_dir;
  std::filesystem::path initial_bathymetry;
  std::filesystem::path output_dir = "out";

  /// Checks every numeric field against its owning type's invariants.
  void validate() const;

  /// Layout of the configured sensors (all of them, in id order).
  SensorLayout layout() const;
  /// Index into sensor_ids for each requested id; ConfigError for unknown ids.
  std::vector<std::size_t> select_sensors(const std::vector<int>& ids) const;
};

/// Parses `key = value` lines; `#` starts a comment. Relative paths are
/// resolved against the config file's directory.
RunConfig load_config(const std::filesystem::path& path);

/// Same, from in-memory text; `base_dir` anchors relative paths.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                       const std::string& source = "<config>");

std::vector<int> parse_id_list(const std::string& text);

}  // namespace bathy::cli
