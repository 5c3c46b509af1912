#pragma once

#include <optional>

#include "bathy/data_io.hpp"

namespace bathy {

/// Resolution of the synthetic "truth" run and of the inversion it feeds.
struct TwinRequest {
  int fine_M = 100;
  double fine_dt = 5e-5;
  std::shared_ptr<const Grid> coarse_grid;
  double coarse_dt = 1e-3;
  double T = 1.0;
  bool full_field = true;
  std::optional<SensorLayout> sensors;
};

struct TwinObservations {
  std::optional<ObservationSet> full_field;
  std::optional<ObservationSet> sensors;
};

/// Runs the forward model once on the fine discretisation with `b_ex_fine`
/// (nodal on the fine grid) and transfers H = h + b_ex to the coarse grid
/// (polynomial interpolation) and coarse time steps (cubic splines).
TwinObservations generate_twins(const Field& b_ex_fine, const BoundaryForcing& forcing,
                                const PhysParams& params, const TwinRequest& request);

/// Single-mode convenience form.
ObservationSet generate_twin(const Field& b_ex_fine, const BoundaryForcing& forcing,
                             const PhysParams& params, int fine_M, double fine_dt,
                             std::shared_ptr<const Grid> coarse_grid, double coarse_dt, double T,
                             ObservationMode mode, const std::optional<SensorLayout>& layout = {});

}  // namespace bathy
