#include "bathy/adjoint.hpp"

#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

namespace {

constexpr double kMinBoundaryDepth = 1e-6;

double guarded_depth(double h, int step) {
  if (!(h >= kMinBoundaryDepth)) {
    std::ostringstream msg;
    msg << "adjoint: boundary depth h(L)=" << h << " below " << kMinBoundaryDepth << " at step "
        << step;
    throw NumericalFailure(msg.str());
  }
  return h;
}

void apply_adjoint_bcs(AdjointState& a, const State& fwd, int step) {
  const Eigen::Index last = a.p2.size() - 1;
  a.p2(last) = 0.0;
  a.p1(0) = -2.0 * fwd.u(0) / guarded_depth(fwd.h(0), step) * a.p2(0);
}

State midpoint(const State& a, const State& b) {
  return {0.5 * (a.h + b.h), 0.5 * (a.u + b.u)};
}

}  // namespace

AdjointOperator::AdjointOperator(std::shared_ptr<const Grid> grid, const PhysParams& params)
    : grid_(std::move(grid)), params_(params) {
  params_.validate();
  if (params_.dealias) filter_ = spectral_filter_matrix(*grid_);
}

AdjointState AdjointOperator::rhs(const AdjointState& a, const State& fwd, const Field& src) const {
  const int M = grid_->size();
  Eigen::MatrixXd P(M, 2);
  P.col(0) = a.p1;
  P.col(1) = a.p2;
  const Eigen::MatrixXd Px = grid_->diff_op() * P;

  Eigen::MatrixXd prod(M, 3);
  prod.col(0) = fwd.u.cwiseProduct(Px.col(0));
  prod.col(1) = fwd.h.cwiseProduct(Px.col(0));
  prod.col(2) = fwd.u.cwiseProduct(Px.col(1));
  if (params_.dealias) prod = (filter_ * prod).eval();

  AdjointState d;
  d.p1 = prod.col(0) + params_.g * Px.col(1) + src;
  d.p2 = prod.col(1) + 2.0 * prod.col(2) - params_.kappa * a.p2;
  return d;
}

AdjointState adjoint_rhs(const AdjointState& a, const State& fwd, const Field& src,
                         const PhysParams& p, const std::shared_ptr<const Grid>& g) {
  const int M = g->size();
  if (a.p1.size() != M || a.p2.size() != M || fwd.h.size() != M || fwd.u.size() != M ||
      src.size() != M) {
    throw UsageError("adjoint_rhs: field sizes do not match the grid");
  }
  if (!a.p1.allFinite() || !a.p2.allFinite()) throw NumericalFailure("adjoint_rhs: non-finite state");
  return AdjointOperator(g, p).rhs(a, fwd, src);
}

AdjointTrajectory run_adjoint(const Trajectory& fwd, const MismatchSource& src,
                              const Field& terminal_p1, const PhysParams& p) {
  const Grid& grid = *fwd.grid;
  const int M = grid.size();
  const int N = fwd.n_steps;
  if (static_cast<int>(fwd.states.size()) != N + 1) {
    throw UsageError("run_adjoint: forward trajectory is incomplete");
  }
  if (src.values.rows() != N + 1 || src.values.cols() != M) {
    throw UsageError("run_adjoint: mismatch source is not aligned with the trajectory");
  }
  if (terminal_p1.size() != M) throw UsageError("run_adjoint: terminal_p1 has the wrong size");

  const AdjointOperator op(fwd.grid, p);
  const double dt = fwd.dt;

  AdjointTrajectory out;
  out.states.resize(static_cast<std::size_t>(N) + 1);

  AdjointState y{terminal_p1, Field::Zero(M)};
  apply_adjoint_bcs(y, fwd.states[N], N);
  out.states[N] = y;

  AdjointState stage;
  for (int n = N; n > 0; --n) {
    const State& s_now = fwd.states[n];
    const State& s_next = fwd.states[n - 1];
    const State s_mid = midpoint(s_now, s_next);
    const Field src_now = src.values.row(n).transpose();
    const Field src_next = src.values.row(n - 1).transpose();
    const Field src_mid = 0.5 * (src_now + src_next);

    const AdjointState k1 = op.rhs(y, s_now, src_now);
    stage.p1 = y.p1 + 0.5 * dt * k1.p1;
    stage.p2 = y.p2 + 0.5 * dt * k1.p2;
    apply_adjoint_bcs(stage, s_mid, n);
    const AdjointState k2 = op.rhs(stage, s_mid, src_mid);
    stage.p1 = y.p1 + 0.5 * dt * k2.p1;
    stage.p2 = y.p2 + 0.5 * dt * k2.p2;
    apply_adjoint_bcs(stage, s_mid, n);
    const AdjointState k3 = op.rhs(stage, s_mid, src_mid);
    stage.p1 = y.p1 + dt * k3.p1;
    stage.p2 = y.p2 + dt * k3.p2;
    apply_adjoint_bcs(stage, s_next, n - 1);
    const AdjointState k4 = op.rhs(stage, s_next, src_next);

    y.p1 += (dt / 6.0) * (k1.p1 + 2.0 * k2.p1 + 2.0 * k3.p1 + k4.p1);
    y.p2 += (dt / 6.0) * (k1.p2 + 2.0 * k2.p2 + 2.0 * k3.p2 + k4.p2);
    apply_adjoint_bcs(y, s_next, n - 1);
    if (!y.p1.allFinite() || !y.p2.allFinite()) {
      std::ostringstream msg;
      msg << "adjoint: non-finite state at step " << n - 1;
      throw NumericalFailure(msg.str());
    }
    out.states[static_cast<std::size_t>(n - 1)] = y;
  }

  out.p5 = out.states.front().p1;

  out.accumulated_integral = Field::Zero(M);
  for (int n = 0; n <= N; ++n) {
    const double w = (n == 0 || n == N) ? 0.5 * dt : dt;
    const Field& p2 = out.states[static_cast<std::size_t>(n)].p2;
    out.accumulated_integral +=
        w * (src.values.row(n).transpose() + p.g * (grid.diff_op() * p2));
  }
  return out;
}

std::vector<double> boundary_multiplier_p3(const AdjointTrajectory& adj, const Trajectory& fwd,
                                           const PhysParams& p) {
  if (adj.states.size() != fwd.states.size()) {
    throw UsageError("boundary_multiplier_p3: trajectories are not aligned");
  }
  std::vector<double> p3;
  p3.reserve(adj.states.size());
  for (std::size_t n = 0; n < adj.states.size(); ++n) {
    const State& s = fwd.states[n];
    const double h = guarded_depth(s.h(0), static_cast<int>(n));
    p3.push_back((2.0 * s.u(0) * s.u(0) / h - p.g) * adj.states[n].p2(0));
  }
  return p3;
}

}  // namespace bathy
