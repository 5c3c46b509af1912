#pragma once

#include "bathy/data_io.hpp"

namespace bathy {

/// Pointwise centre and confidence half-width of a t interval.
struct IntervalSeries {
  TimeSeries center;
  TimeSeries halfwidth;
};

/// Mean of n >= 2 runs with half-width t * s / sqrt(n), s the sample
/// standard deviation (n - 1 denominator).
IntervalSeries ensemble_mean_ci(const RunEnsemble& e, double t_value);

/// Difference of means a - b with pooled half-width t * s_p * sqrt(2 / n).
/// Both ensembles need the same n and time axis.
IntervalSeries two_sample_difference_ci(const RunEnsemble& a, const RunEnsemble& b,
                                        double t_value);

}  // namespace bathy
