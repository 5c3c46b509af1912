#include "bathy/objective.hpp"

#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

void ObjectiveWeights::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << "weights." << name << " must be positive, got " << v;
      throw ConfigError(msg.str());
    }
  };
  positive(gamma, "gamma");
  positive(delta, "delta");
  positive(lambda1, "lambda1");
  positive(lambda2, "lambda2");
}

void SensorLayout::validate(const Grid& g) const {
  if (positions.empty()) throw ConfigError("sensors: at least one position is required");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ConfigError("sensors.variance must be positive");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double x = positions[i];
    if (!(x > g.left() && x < g.right())) {
      std::ostringstream msg;
      msg << "sensor position " << x << " is not inside (" << g.left() << ", " << g.right() << ")";
      throw ConfigError(msg.str());
    }
    if (i > 0 && !(x > positions[i - 1])) {
      throw ConfigError("sensor positions must be strictly increasing");
    }
  }
}

DataMisfit DataMisfit::full_field(std::shared_ptr<const Grid> grid, SpaceTimeField H_obs) {
  if (H_obs.cols() != grid->size() || H_obs.rows() < 2) {
    throw UsageError("full-field observation does not match the grid");
  }
  DataMisfit m;
  m.mode_ = Mode::FullField;
  m.grid_ = std::move(grid);
  m.obs_ = std::move(H_obs);
  return m;
}

DataMisfit DataMisfit::sensors(std::shared_ptr<const Grid> grid, SensorLayout layout,
                               SpaceTimeField sensor_obs) {
  layout.validate(*grid);
  const auto mp = static_cast<Eigen::Index>(layout.positions.size());
  if (sensor_obs.cols() != mp || sensor_obs.rows() < 2) {
    throw UsageError("sensor observation does not match the sensor layout");
  }
  DataMisfit m;
  m.mode_ = Mode::Sensors;
  m.grid_ = std::move(grid);
  m.obs_ = std::move(sensor_obs);
  m.layout_ = std::move(layout);

  const Grid& g = *m.grid_;
  m.eval_ = g.evaluation_matrix(m.layout_.positions);
  m.kernels_.resize(g.size(), mp);
  for (Eigen::Index i = 0; i < mp; ++i) {
    const double xi = m.layout_.positions[static_cast<std::size_t>(i)];
    for (int k = 0; k < g.size(); ++k) {
      const double d = g.nodes()(k) - xi;
      m.kernels_(k, i) = std::exp(-0.5 * d * d / m.layout_.variance);
    }
  }
  m.gram_ = m.kernels_.transpose() * g.quad_weights().asDiagonal() * m.kernels_;
  m.density_ = g.quad_weights().cwiseInverse().asDiagonal() * m.eval_.transpose() * m.gram_;
  return m;
}

void DataMisfit::check_alignment(const Trajectory& traj) const {
  if (traj.n_steps != n_steps()) {
    std::ostringstream msg;
    msg << "objective: observation has " << obs_.rows() << " time samples, trajectory has "
        << traj.n_steps + 1;
    throw UsageError(msg.str());
  }
  if (traj.grid->size() != grid_->size()) {
    throw UsageError("objective: trajectory grid differs from the observation grid");
  }
}

SpaceTimeField DataMisfit::residuals(const SpaceTimeField& H) const {
  if (mode_ == Mode::FullField) return H - obs_;
  return (H * eval_.transpose()) - obs_;
}

double DataMisfit::spatial_energy(const Eigen::RowVectorXd& r) const {
  if (mode_ == Mode::FullField) {
    return r.cwiseProduct(r).dot(grid_->quad_weights().transpose());
  }
  return (r * gram_ * r.transpose())(0, 0);
}

Eigen::RowVectorXd DataMisfit::density(const Eigen::RowVectorXd& r) const {
  if (mode_ == Mode::FullField) return r;
  return r * density_.transpose();
}

double DataMisfit::evaluate(const Trajectory& traj, const Bathymetry& b,
                            const ObjectiveWeights& w) const {
  check_alignment(traj);
  const SpaceTimeField r = residuals(surface_elevation(traj, b));
  const int N = n_steps();
  double running = 0.0;
  for (int n = 0; n <= N; ++n) {
    const double tw = (n == 0 || n == N) ? 0.5 * traj.dt : traj.dt;
    running += tw * spatial_energy(r.row(n));
  }
  return 0.5 * w.gamma * running + 0.5 * w.delta * spatial_energy(r.row(N));
}

AdjointForcing DataMisfit::adjoint_forcing(const Trajectory& traj, const Bathymetry& b,
                                           const ObjectiveWeights& w) const {
  check_alignment(traj);
  const SpaceTimeField r = residuals(surface_elevation(traj, b));
  const int N = n_steps();
  AdjointForcing out;
  out.source.values.resize(N + 1, grid_->size());
  for (int n = 0; n <= N; ++n) out.source.values.row(n) = w.gamma * density(r.row(n));
  out.terminal_p1 = w.delta * density(r.row(N)).transpose();
  return out;
}

double regularisation(const Grid& g, const Bathymetry& b, const ObjectiveWeights& w) {
  const Field bx = differentiate(g, b.values);
  return 0.5 * w.lambda1 * integrate(g, b.values.cwiseProduct(b.values)) +
         0.5 * w.lambda2 * integrate(g, bx.cwiseProduct(bx));
}

double eval_objective_full(const Trajectory& traj, const Bathymetry& b, const SpaceTimeField& H_obs,
                           const ObjectiveWeights& w) {
  const DataMisfit m = DataMisfit::full_field(traj.grid, H_obs);
  return m.evaluate(traj, b, w) + regularisation(*traj.grid, b, w);
}

double eval_objective_sensors(const Trajectory& traj, const Bathymetry& b,
                              const SpaceTimeField& sensor_obs, const SensorLayout& layout,
                              const ObjectiveWeights& w) {
  const DataMisfit m = DataMisfit::sensors(traj.grid, layout, sensor_obs);
  return m.evaluate(traj, b, w) + regularisation(*traj.grid, b, w);
}

AdjointForcing build_mismatch_source(const Trajectory& traj, const Bathymetry& b,
                                     const DataMisfit& misfit, const ObjectiveWeights& w) {
  return misfit.adjoint_forcing(traj, b, w);
}

Field assemble_l2_gradient(const Trajectory& fwd, const AdjointTrajectory& adj,
                           const Bathymetry& b, const Field& terminal, const ObjectiveWeights& w) {
  const Grid& g = *fwd.grid;
  if (adj.states.size() != fwd.states.size()) {
    throw UsageError("assemble_l2_gradient: adjoint and forward trajectories are not aligned");
  }
  if (b.values.size() != g.size() || terminal.size() != g.size()) {
    throw UsageError("assemble_l2_gradient: field sizes do not match the grid");
  }
  const Field bxx = differentiate(g, differentiate(g, b.values));
  return adj.accumulated_integral + terminal + w.lambda1 * b.values - w.lambda2 * bxx - adj.p5;
}

H1Smoother::H1Smoother(const Grid& g) : M_(g.size()) {
  const Eigen::MatrixXd& D = g.diff_op();
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(M_, M_) - D * D;
  A.row(0).setZero();
  A(0, 0) = 1.0;
  A.row(M_ - 1).setZero();
  A(M_ - 1, M_ - 1) = 1.0;
  lu_.compute(A);
  if (!std::isfinite(lu_.rcond()) || lu_.rcond() < 1e-15) {
    throw NumericalFailure("h1_smooth: Helmholtz system is singular");
  }
}

Field H1Smoother::operator()(const Field& v_tilde) const {
  if (v_tilde.size() != M_) throw UsageError("h1_smooth: field size does not match the grid");
  Field rhs = v_tilde;
  rhs(0) = 0.0;
  rhs(M_ - 1) = 0.0;
  Field v = lu_.solve(rhs);
  v(0) = 0.0;
  v(M_ - 1) = 0.0;
  return v;
}

Field h1_smooth(const Field& v_tilde, const Grid& g) { return H1Smoother(g)(v_tilde); }

}  // namespace bathy
