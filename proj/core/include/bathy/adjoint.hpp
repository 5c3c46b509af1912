#pragma once

#include <vector>

#include "bathy/grid.hpp"
#include "bathy/swe_forward.hpp"

namespace bathy {

struct AdjointState {
  Field p1;
  Field p2;
};

/// Right-hand side of the p1 equation, one row per stored forward step
/// (physical time index), evaluated as a density on the grid.
struct MismatchSource {
  SpaceTimeField values;

  static MismatchSource zero(int n_steps, int M) {
    return {SpaceTimeField::Zero(n_steps + 1, M)};
  }
};

/// Adjoint solution indexed by physical time step, aligned with the forward
/// trajectory: states[n] holds (p1, p2) at t = n * dt.
struct AdjointTrajectory {
  std::vector<AdjointState> states;
  Field p5;                    // p1 at t = 0
  Field accumulated_integral;  // int_0^T (source + g p2_x) dt, trapezoidal
};

/// Tendencies of the time-reversed adjoint system (tau = T - t):
///   dp1/dtau = u p1_x + g p2_x + src
///   dp2/dtau = h p1_x + 2 u p2_x - kappa p2
class AdjointOperator {
 public:
  AdjointOperator(std::shared_ptr<const Grid> grid, const PhysParams& params);

  AdjointState rhs(const AdjointState& a, const State& fwd, const Field& src) const;

 private:
  std::shared_ptr<const Grid> grid_;
  PhysParams params_;
  Eigen::MatrixXd filter_;
};

AdjointState adjoint_rhs(const AdjointState& a, const State& fwd, const Field& src,
                         const PhysParams& p, const std::shared_ptr<const Grid>& g);

/// Integrates the time-reversed adjoint with RK4 at the trajectory's dt.
///
/// Forward values at half steps are linear interpolants of neighbouring
/// stored states. Boundary rows p2(R) = 0 and p1(L) = -2 u(L)/h(L) p2(L) are
/// imposed after every stage.
AdjointTrajectory run_adjoint(const Trajectory& fwd, const MismatchSource& src,
                              const Field& terminal_p1, const PhysParams& p);

/// p3(t) = (2 u(L)^2 / h(L) - g) p2(L); a diagnostic, one value per stored step.
std::vector<double> boundary_multiplier_p3(const AdjointTrajectory& adj, const Trajectory& fwd,
                                           const PhysParams& p);

}  // namespace bathy
