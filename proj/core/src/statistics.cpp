#include "bathy/statistics.hpp"

#include <cmath>

#include "bathy/errors.hpp"

namespace bathy {

namespace {

struct Moments {
  std::vector<double> mean;
  std::vector<double> var;  // unbiased
};

Moments moments(const RunEnsemble& e) {
  const std::size_t len = e.runs.front().size();
  const double n = e.n();
  Moments m{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  for (const auto& r : e.runs) {
    for (std::size_t i = 0; i < len; ++i) m.mean[i] += r.values[i];
  }
  for (double& v : m.mean) v /= n;
  for (const auto& r : e.runs) {
    for (std::size_t i = 0; i < len; ++i) {
      const double d = r.values[i] - m.mean[i];
      m.var[i] += d * d;
    }
  }
  for (double& v : m.var) v /= (n - 1.0);
  return m;
}

void require_runs(const RunEnsemble& e) {
  if (e.n() < 2) throw ConfigError("confidence interval needs at least two runs");
  e.validate();
}

}  // namespace

IntervalSeries ensemble_mean_ci(const RunEnsemble& e, double t_value) {
  require_runs(e);
  const Moments m = moments(e);
  const double scale = t_value / std::sqrt(static_cast<double>(e.n()));
  IntervalSeries out;
  out.center.label = "mean";
  out.halfwidth.label = "halfwidth";
  out.center.times = out.halfwidth.times = e.runs.front().times;
  out.center.values = m.mean;
  out.halfwidth.values.resize(m.var.size());
  for (std::size_t i = 0; i < m.var.size(); ++i) {
    out.halfwidth.values[i] = scale * std::sqrt(m.var[i]);
  }
  return out;
}

IntervalSeries two_sample_difference_ci(const RunEnsemble& a, const RunEnsemble& b,
                                        double t_value) {
  require_runs(a);
  require_runs(b);
  if (a.n() != b.n()) throw UsageError("two-sample interval: ensembles differ in run count");
  if (a.runs.front().times != b.runs.front().times) {
    throw UsageError("two-sample interval: ensembles do not share a time axis");
  }
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  const double n = a.n();
  const double scale = t_value * std::sqrt(2.0 / n);
  IntervalSeries out;
  out.center.label = "difference";
  out.halfwidth.label = "halfwidth";
  out.center.times = out.halfwidth.times = a.runs.front().times;
  out.center.values.resize(ma.mean.size());
  out.halfwidth.values.resize(ma.mean.size());
  for (std::size_t i = 0; i < ma.mean.size(); ++i) {
    out.center.values[i] = ma.mean[i] - mb.mean[i];
    const double pooled = 0.5 * (ma.var[i] + mb.var[i]);
    out.halfwidth.values[i] = scale * std::sqrt(pooled);
  }
  return out;
}

}  // namespace bathy
