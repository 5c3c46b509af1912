#pragma once

#include <string>

#include "bathy/data_io.hpp"
#include "bathy/grid.hpp"

namespace bathy {

/// Percent errors of a reconstruction against the reference.
struct ErrorReport {
  double rel_l2_pct = 0.0;
  double rel_linf_pct = 0.0;
  double nrmse_pct = 0.0;

  /// `rel_l2_pct,rel_linf_pct,nrmse_pct` with round-trip precision.
  std::string csv_row() const;
  static constexpr const char* kCsvHeader = "rel_l2_pct,rel_linf_pct,nrmse_pct";
};

/// Nodal relative l2 / l-infinity errors and the range-normalised RMSE
/// sqrt(mean((b - b_ex)^2)) / (max b_ex - min b_ex), all in percent.
ErrorReport bathymetry_errors(const Field& b, const Field& b_ex);

/// ||sim - meas||_2 / ||meas||_2 over samples on a shared time axis.
double series_rel_l2(const TimeSeries& sim, const TimeSeries& meas);

}  // namespace bathy
