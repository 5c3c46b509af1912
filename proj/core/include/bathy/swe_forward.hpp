#pragma once

#include <functional>
#include <memory>
#include <string_view>
#include <vector>

#include "bathy/grid.hpp"
#include "bathy/spline.hpp"

namespace bathy {

struct PhysParams {
  double g = 9.81;     // m/s^2
  double kappa = 0.2;  // 1/s, linear bottom friction
  bool dealias = true;  // exponential filter on quadratic products

  void validate() const;
};

/// Bottom elevation above the datum, nodal on a Grid.
struct Bathymetry {
  Field values;

  static Bathymetry zero(const Grid& g) { return {Field::Zero(g.size())}; }
};

/// Water depth h (strictly positive) and velocity u, nodal.
struct State {
  Field h;
  Field u;
};

struct Tendency {
  Field dh;
  Field du;
};

/// Observed surface elevation at x = L, splined in time.
class BoundaryForcing {
 public:
  BoundaryForcing() = default;
  explicit BoundaryForcing(SampledCurve surface) : surface_(std::move(surface)) {}

  double surface_at(double t) const { return surface_(t); }
  bool covers(double t0, double t1) const;
  const SampledCurve& curve() const { return surface_; }

 private:
  SampledCurve surface_;
};

/// Forward solution stored at every `dt` (the storage interval) on `grid`.
struct Trajectory {
  std::shared_ptr<const Grid> grid;
  double dt = 0.0;
  int n_steps = 0;
  std::vector<State> states;  // n_steps + 1 entries, states[n] at t = n * dt
  double t_final = 0.0;
  double max_cfl = 0.0;

  double time(int n) const { return n * dt; }
};

/// Precomputed operators for the semi-discrete quasi-linear SWE on one grid.
class SweOperator {
 public:
  SweOperator(std::shared_ptr<const Grid> grid, const PhysParams& params);

  /// dh/dt = -(h u)_x, du/dt = -(u^2)_x - g (h + b)_x - kappa u.
  Tendency rhs(const State& s, const Field& b) const;

  const Grid& grid() const { return *grid_; }
  const PhysParams& params() const { return params_; }
  /// Identity when dealiasing is off.
  const Eigen::MatrixXd& filter() const { return filter_; }

 private:
  std::shared_ptr<const Grid> grid_;
  PhysParams params_;
  Eigen::MatrixXd filter_;
};

Tendency swe_rhs(const State& s, const Bathymetry& b, const PhysParams& p,
                 const std::shared_ptr<const Grid>& g);

/// Imposes h(L) = H_left(t) - b(L) and u(R) = 0.
State apply_forward_bcs(State s, const BoundaryForcing& forcing, const Bathymetry& b, double t);

struct ForwardOptions {
  /// Store every k-th step; the trajectory's dt is then k times the solver step.
  int store_stride = 1;
  /// Receives a message when the acoustic CFL number exceeds `cfl_warn`.
  std::function<void(std::string_view)> warn;
  double cfl_warn = 1.0;
};

/// Classical RK4 from the lake-at-rest state h = H_left(0) - b, u = 0.
Trajectory run_forward(const Bathymetry& b, const BoundaryForcing& forcing, const PhysParams& p,
                       std::shared_ptr<const Grid> g, double dt, double T,
                       const ForwardOptions& options = {});

/// H = h + b for every stored step.
SpaceTimeField surface_elevation(const Trajectory& traj, const Bathymetry& b);

/// Number of steps n with n * dt = T; throws ConfigError when T is not a multiple of dt.
int step_count(double dt, double T);

}  // namespace bathy
