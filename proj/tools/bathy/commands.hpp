#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bathy/config.hpp"
#include "bathy/metrics.hpp"

namespace bathy::cli {

/// Output sinks for one command: `out` for results, `err` for progress and
/// diagnostics.
struct Streams {
  std::ostream& out;
  std::ostream& err;
};

/// surface_sensors.csv and surface_field.csv for the configured bathymetry
/// (zero when no reference is configured).
void cmd_forward(const RunConfig& cfg, const Streams& io);

/// observation_full.csv and/or observation_sensor_<id>.csv plus twin_meta.csv.
void cmd_twin(const RunConfig& cfg, const Streams& io);

/// bathymetry_final.csv, history.csv and (with a reference) errors.csv.
/// Empty `sensors` uses every configured sensor.
void cmd_reconstruct(const RunConfig& cfg, const std::vector<int>& sensors, const Streams& io);

/// Both tables splined onto the configured grid.
ErrorReport cmd_metrics(const RunConfig& cfg, const std::filesystem::path& b,
                        const std::filesystem::path& b_ex);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 success, 1 configuration/usage/input error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bathy::cli
