#include "bathy/swe_forward.hpp"

#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

void PhysParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("physics.g must be positive");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ConfigError("physics.kappa must be >= 0");
}

bool BoundaryForcing::covers(double t0, double t1) const {
  if (surface_.size() < 2) return false;
  const double slack = 1e-12 * (surface_.back() - surface_.front());
  return surface_.front() <= t0 + slack && surface_.back() >= t1 - slack;
}

SweOperator::SweOperator(std::shared_ptr<const Grid> grid, const PhysParams& params)
    : grid_(std::move(grid)), params_(params) {
  params_.validate();
  filter_ = params_.dealias ? spectral_filter_matrix(*grid_)
                            : Eigen::MatrixXd::Identity(grid_->size(), grid_->size());
}

Tendency SweOperator::rhs(const State& s, const Field& b) const {
  const int M = grid_->size();
  // Columns: filtered h*u, filtered u*u, surface h + b. One product with D.
  Eigen::MatrixXd X(M, 3);
  X.col(0) = s.h.cwiseProduct(s.u);
  X.col(1) = s.u.cwiseProduct(s.u);
  if (params_.dealias) X.leftCols<2>() = (filter_ * X.leftCols<2>()).eval();
  X.col(2) = s.h + b;
  const Eigen::MatrixXd Y = grid_->diff_op() * X;

  Tendency t;
  t.dh = -Y.col(0);
  t.du = -Y.col(1) - params_.g * Y.col(2) - params_.kappa * s.u;
  return t;
}

Tendency swe_rhs(const State& s, const Bathymetry& b, const PhysParams& p,
                 const std::shared_ptr<const Grid>& g) {
  if (s.h.size() != g->size() || s.u.size() != g->size() || b.values.size() != g->size()) {
    throw UsageError("swe_rhs: state or bathymetry does not match the grid");
  }
  if (!s.h.allFinite() || !s.u.allFinite()) throw NumericalFailure("swe_rhs: non-finite state");
  return SweOperator(g, p).rhs(s, b.values);
}

State apply_forward_bcs(State s, const BoundaryForcing& forcing, const Bathymetry& b, double t) {
  const Eigen::Index last = s.u.size() - 1;
  s.h(0) = forcing.surface_at(t) - b.values(0);
  s.u(last) = 0.0;
  if (!(s.h(0) > 0.0)) {
    std::ostringstream msg;
    msg << "forward: dry left boundary at t=" << t << " (h(L)=" << s.h(0) << ")";
    throw NumericalFailure(msg.str());
  }
  return s;
}

int step_count(double dt, double T) {
  if (!(dt > 0.0) || !(T > 0.0)) throw ConfigError("time step and horizon must be positive");
  const double ratio = T / dt;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(n * dt - T) > 1e-10 * T) {
    std::ostringstream msg;
    msg << "horizon T=" << T << " is not an integer multiple of dt=" << dt;
    throw ConfigError(msg.str());
  }
  return static_cast<int>(n);
}

namespace {

double acoustic_cfl(const State& s, double g, double dt, double spacing) {
  double speed = 0.0;
  for (Eigen::Index i = 0; i < s.h.size(); ++i) {
    speed = std::max(speed, std::abs(s.u(i)) + std::sqrt(g * std::max(s.h(i), 0.0)));
  }
  return speed * dt / spacing;
}

void check_state(const State& s, int step, double t) {
  if (!s.h.allFinite() || !s.u.allFinite()) {
    std::ostringstream msg;
    msg << "forward: non-finite state at step " << step << " (t=" << t << ")";
    throw NumericalFailure(msg.str());
  }
  Eigen::Index where = 0;
  const double hmin = s.h.minCoeff(&where);
  if (!(hmin > 0.0)) {
    std::ostringstream msg;
    msg << "forward: depth lost positivity at step " << step << " (t=" << t << "), node " << where
        << ", h=" << hmin;
    throw NumericalFailure(msg.str());
  }
}

}  // namespace

Trajectory run_forward(const Bathymetry& b, const BoundaryForcing& forcing, const PhysParams& p,
                       std::shared_ptr<const Grid> g, double dt, double T,
                       const ForwardOptions& options) {
  if (b.values.size() != g->size()) {
    throw UsageError("run_forward: bathymetry does not match the grid");
  }
  if (!b.values.allFinite()) throw UsageError("run_forward: non-finite bathymetry");
  if (options.store_stride < 1) throw UsageError("run_forward: store_stride must be >= 1");
  const int n_steps = step_count(dt, T);
  if (n_steps % options.store_stride != 0) {
    throw UsageError("run_forward: step count is not a multiple of store_stride");
  }
  if (!forcing.covers(0.0, T)) {
    std::ostringstream msg;
    msg << "run_forward: boundary forcing does not cover [0, " << T << "]";
    throw DomainError(msg.str());
  }

  const SweOperator op(g, p);
  const Field& bv = b.values;
  const double spacing = g->min_spacing();

  State y;
  y.h = Field::Constant(g->size(), forcing.surface_at(0.0)) - bv;
  y.u = Field::Zero(g->size());
  y = apply_forward_bcs(std::move(y), forcing, b, 0.0);
  check_state(y, 0, 0.0);

  Trajectory traj;
  traj.grid = g;
  traj.dt = dt * options.store_stride;
  traj.n_steps = n_steps / options.store_stride;
  traj.t_final = T;
  traj.states.reserve(static_cast<std::size_t>(traj.n_steps) + 1);
  traj.states.push_back(y);
  traj.max_cfl = acoustic_cfl(y, p.g, dt, spacing);
  bool warned = false;

  State stage;
  for (int n = 0; n < n_steps; ++n) {
    const double t = n * dt;
    const double t_half = t + 0.5 * dt;
    const double t_next = (n + 1) * dt;

    const Tendency k1 = op.rhs(y, bv);
    stage.h = y.h + 0.5 * dt * k1.dh;
    stage.u = y.u + 0.5 * dt * k1.du;
    stage = apply_forward_bcs(std::move(stage), forcing, b, t_half);
    const Tendency k2 = op.rhs(stage, bv);
    stage.h = y.h + 0.5 * dt * k2.dh;
    stage.u = y.u + 0.5 * dt * k2.du;
    stage = apply_forward_bcs(std::move(stage), forcing, b, t_half);
    const Tendency k3 = op.rhs(stage, bv);
    stage.h = y.h + dt * k3.dh;
    stage.u = y.u + dt * k3.du;
    stage = apply_forward_bcs(std::move(stage), forcing, b, t_next);
    const Tendency k4 = op.rhs(stage, bv);

    y.h += (dt / 6.0) * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
    y.u += (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
    y = apply_forward_bcs(std::move(y), forcing, b, t_next);
    check_state(y, n + 1, t_next);

    const double cfl = acoustic_cfl(y, p.g, dt, spacing);
    traj.max_cfl = std::max(traj.max_cfl, cfl);
    if (cfl > options.cfl_warn && !warned && options.warn) {
      std::ostringstream msg;
      msg << "forward: acoustic CFL number " << cfl << " exceeds " << options.cfl_warn
          << " at step " << n + 1;
      options.warn(msg.str());
      warned = true;
    }

    if ((n + 1) % options.store_stride == 0) traj.states.push_back(y);
  }
  return traj;
}

SpaceTimeField surface_elevation(const Trajectory& traj, const Bathymetry& b) {
  const Eigen::Index M = b.values.size();
  SpaceTimeField H(static_cast<Eigen::Index>(traj.states.size()), M);
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    if (traj.states[n].h.size() != M) {
      throw UsageError("surface_elevation: trajectory and bathymetry sizes differ");
    }
    H.row(static_cast<Eigen::Index>(n)) = (traj.states[n].h + b.values).transpose();
  }
  return H;
}

}  // namespace bathy
