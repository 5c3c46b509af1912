#include "bathy/spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

SampledCurve::SampledCurve(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n != values_.size()) {
    throw UsageError("spline: knots and values differ in length");
  }
  if (n < 2) throw UsageError("spline: need at least two knots");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
      throw UsageError("spline: non-finite knot or value");
    }
    if (i > 0 && !(knots_[i] > knots_[i - 1])) {
      std::ostringstream msg;
      msg << "spline: knots not strictly increasing at index " << i;
      throw UsageError(msg.str());
    }
  }

  // Natural end conditions, tridiagonal solve by forward elimination.
  second_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> diag(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = knots_[i] - knots_[i - 1];
    const double hr = knots_[i + 1] - knots_[i];
    diag[i] = 2.0 * (hl + hr);
    rhs[i] = 6.0 * ((values_[i + 1] - values_[i]) / hr - (values_[i] - values_[i - 1]) / hl);
  }
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double sub = knots_[i] - knots_[i - 1];
    const double m = sub / diag[i - 1];
    diag[i] -= m * sub;
    rhs[i] -= m * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    const double sup = knots_[i + 1] - knots_[i];
    second_[i] = (rhs[i] - sup * second_[i + 1]) / diag[i];
  }
}

double SampledCurve::operator()(double x) const {
  const double span = knots_.back() - knots_.front();
  const double slack = 1e-12 * span;
  if (!(x >= knots_.front() - slack && x <= knots_.back() + slack)) {
    std::ostringstream msg;
    msg << "spline: query " << x << " outside [" << knots_.front() << ", " << knots_.back() << "]";
    throw DomainError(msg.str());
  }
  x = std::clamp(x, knots_.front(), knots_.back());

  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t i = (it == knots_.begin()) ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (i >= knots_.size() - 1) i = knots_.size() - 2;
  if (x == knots_[i]) return values_[i];
  if (x == knots_[i + 1]) return values_[i + 1];

  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - x) / h;
  const double b = (x - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * second_[i] + (b * b * b - b) * second_[i + 1]) * (h * h) / 6.0;
}

std::vector<double> spline_eval(const SampledCurve& c, std::span<const double> queries) {
  std::vector<double> out;
  out.reserve(queries.size());
  for (double q : queries) out.push_back(c(q));
  return out;
}

}  // namespace bathy
