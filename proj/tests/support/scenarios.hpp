#pragma once

#include <cmath>
#include <memory>
#include <numbers>

#include "bathy/data_io.hpp"
#include "bathy/swe_forward.hpp"

namespace scenario {

inline bathy::BoundaryForcing constant_forcing(double level, double T) {
  return bathy::BoundaryForcing(bathy::SampledCurve({0.0, 0.5 * T, T + 1.0}, {level, level, level}));
}

// Still water at 0.3 m, then a smoothly ramped two-tone wave train.
inline bathy::TimeSeries wave_series(double T, double amplitude = 0.008, double dt = 1e-3) {
  bathy::TimeSeries ts;
  const int n = static_cast<int>(std::lround((T + 0.5) / dt));
  for (int i = 0; i <= n; ++i) {
    const double t = i * dt;
    const double ramp = 1.0 - std::exp(-(t / 1.5) * (t / 1.5));
    ts.times.push_back(t);
    ts.values.push_back(0.3 + ramp * (amplitude * std::sin(2 * std::numbers::pi * t / 2.0) +
                                      0.5 * amplitude * std::sin(2 * std::numbers::pi * t / 1.3 + 0.7)));
  }
  return ts;
}

inline bathy::BoundaryForcing wave_forcing(double T, double amplitude = 0.008) {
  return bathy::BoundaryForcing(wave_series(T, amplitude).curve());
}

// Gaussian hill of height `height` centred at `x0`.
inline bathy::Field hill(const bathy::Grid& g, double height = 0.1, double x0 = 4.0,
                         double width = 0.4) {
  return g.nodes().unaryExpr([&](double x) {
    return height * std::exp(-0.5 * (x - x0) * (x - x0) / (width * width));
  });
}

inline std::shared_ptr<const bathy::Grid> flume_grid(int M = 68) {
  return std::make_shared<const bathy::Grid>(M, 1.5, 15.0);
}

}  // namespace scenario
