#include "bathy/metrics.hpp"

#include <cmath>

#include "bathy/csv.hpp"
#include "bathy/errors.hpp"

namespace bathy {

std::string ErrorReport::csv_row() const {
  return csv::format(rel_l2_pct) + ',' + csv::format(rel_linf_pct) + ',' + csv::format(nrmse_pct);
}

ErrorReport bathymetry_errors(const Field& b, const Field& b_ex) {
  if (b.size() != b_ex.size() || b.size() == 0) {
    throw UsageError("bathymetry_errors: fields differ in length");
  }
  const double range = b_ex.maxCoeff() - b_ex.minCoeff();
  if (!(range > 0.0)) throw DomainError("bathymetry_errors: NRMSE undefined for a constant reference");
  const double ref_l2 = b_ex.norm();
  const double ref_linf = b_ex.cwiseAbs().maxCoeff();
  if (!(ref_l2 > 0.0)) throw DomainError("bathymetry_errors: relative norms undefined for a zero reference");

  const Field diff = b - b_ex;
  ErrorReport r;
  r.rel_l2_pct = 100.0 * diff.norm() / ref_l2;
  r.rel_linf_pct = 100.0 * diff.cwiseAbs().maxCoeff() / ref_linf;
  r.nrmse_pct = 100.0 * std::sqrt(diff.squaredNorm() / static_cast<double>(b.size())) / range;
  return r;
}

double series_rel_l2(const TimeSeries& sim, const TimeSeries& meas) {
  if (sim.size() != meas.size()) throw UsageError("series_rel_l2: series differ in length");
  for (std::size_t i = 0; i < sim.size(); ++i) {
    if (std::abs(sim.times[i] - meas.times[i]) > 1e-9 * std::max(1.0, std::abs(meas.times[i]))) {
      throw UsageError("series_rel_l2: series do not share a time axis");
    }
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    const double d = sim.values[i] - meas.values[i];
    num += d * d;
    den += meas.values[i] * meas.values[i];
  }
  if (!(den > 0.0)) throw DomainError("series_rel_l2: measured series has zero norm");
  return std::sqrt(num / den);
}

}  // namespace bathy
