#pragma once

#include <span>
#include <vector>

namespace bathy {

/// Natural cubic spline through (knots, values). Knots strictly increasing.
///
/// Evaluation outside [knots.front(), knots.back()] is a DomainError; a
/// relative slack of 1e-12 of the knot span absorbs round-off in query times.
class SampledCurve {
 public:
  SampledCurve() = default;
  SampledCurve(std::vector<double> knots, std::vector<double> values);

  double operator()(double x) const;

  std::size_t size() const { return knots_.size(); }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> second_;  // second derivatives at the knots
};

std::vector<double> spline_eval(const SampledCurve& c, std::span<const double> queries);

}  // namespace bathy
