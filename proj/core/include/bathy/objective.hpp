#pragma once

#include <memory>
#include <vector>

#include "bathy/adjoint.hpp"
#include "bathy/grid.hpp"
#include "bathy/swe_forward.hpp"

namespace bathy {

/// Weights of the data-fidelity, terminal and regularisation terms.
struct ObjectiveWeights {
  double gamma = 0.5;
  double delta = 0.5;
  double lambda1 = 1e-6;
  double lambda2 = 1e-7;

  void validate() const;
};

/// Sensor positions (sorted, strictly inside the domain) and the variance of
/// the Gaussian kernels exp(-(x - x_i)^2 / (2 variance)) replacing point
/// evaluations in the misfit.
struct SensorLayout {
  std::vector<double> positions;
  double variance = 0.045;

  void validate(const Grid& g) const;
};

struct GradientFields {
  Field v_l2;  // L2 gradient
  Field v_h1;  // H1 gradient, zero at both endpoints
};

/// Source of the p1 equation plus its terminal condition.
struct AdjointForcing {
  MismatchSource source;
  Field terminal_p1;
};

/// The data-fidelity part of the objective for one observation mode,
/// precompiled against a grid and a stored time axis.
///
/// Full field: r = H - H_obs on every node and step.
/// Sensors:    m_i(t) = H(x_i, t) - obs_i(t) with H(x_i, .) the collocation
///             interpolant; the spatial integrand is (sum_i m_i G_i(x))^2.
class DataMisfit {
 public:
  enum class Mode { FullField, Sensors };

  static DataMisfit full_field(std::shared_ptr<const Grid> grid, SpaceTimeField H_obs);
  static DataMisfit sensors(std::shared_ptr<const Grid> grid, SensorLayout layout,
                            SpaceTimeField sensor_obs);

  Mode mode() const { return mode_; }
  int n_steps() const { return static_cast<int>(obs_.rows()) - 1; }
  const Grid& grid() const { return *grid_; }
  const SpaceTimeField& observations() const { return obs_; }
  const SensorLayout& layout() const { return layout_; }

  /// Per-step residuals: nodal r (full field) or sensor mismatches m.
  SpaceTimeField residuals(const SpaceTimeField& H) const;

  /// (gamma/2) int_Q (...)^2 + (delta/2) int_Omega (...)^2 at T; no regularisers.
  double evaluate(const Trajectory& traj, const Bathymetry& b, const ObjectiveWeights& w) const;

  AdjointForcing adjoint_forcing(const Trajectory& traj, const Bathymetry& b,
                                 const ObjectiveWeights& w) const;

  /// Gaussian kernel values G_i(x_k): M x m_p.
  const Eigen::MatrixXd& kernels() const { return kernels_; }

 private:
  DataMisfit() = default;
  void check_alignment(const Trajectory& traj) const;
  /// Spatial integral of the squared misfit for one residual row.
  double spatial_energy(const Eigen::RowVectorXd& r) const;
  /// Density on the grid whose quadrature pairing gives d(energy/2)/dH.
  Eigen::RowVectorXd density(const Eigen::RowVectorXd& r) const;

  Mode mode_ = Mode::FullField;
  std::shared_ptr<const Grid> grid_;
  SpaceTimeField obs_;
  SensorLayout layout_;
  Eigen::MatrixXd eval_;     // m_p x M point evaluation
  Eigen::MatrixXd kernels_;  // M x m_p
  Eigen::MatrixXd gram_;     // m_p x m_p, int G_i G_j dx by quadrature
  Eigen::MatrixXd density_;  // M x m_p, W^{-1} E^T A
};

/// (lambda1/2) int b^2 + (lambda2/2) int b_x^2.
double regularisation(const Grid& g, const Bathymetry& b, const ObjectiveWeights& w);

double eval_objective_full(const Trajectory& traj, const Bathymetry& b, const SpaceTimeField& H_obs,
                           const ObjectiveWeights& w);

double eval_objective_sensors(const Trajectory& traj, const Bathymetry& b,
                              const SpaceTimeField& sensor_obs, const SensorLayout& layout,
                              const ObjectiveWeights& w);

AdjointForcing build_mismatch_source(const Trajectory& traj, const Bathymetry& b,
                                     const DataMisfit& misfit, const ObjectiveWeights& w);

/// v~ = int_0^T (src + g p2_x) dt + terminal + lambda1 b - lambda2 b_xx - p5.
///
/// `terminal` is the terminal-cost density, i.e. the terminal_p1 field.
Field assemble_l2_gradient(const Trajectory& fwd, const AdjointTrajectory& adj,
                           const Bathymetry& b, const Field& terminal, const ObjectiveWeights& w);

/// Dense LU of (I - D^2) with Dirichlet rows at both ends.
class H1Smoother {
 public:
  explicit H1Smoother(const Grid& g);
  Field operator()(const Field& v_tilde) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  int M_;
};

/// Solves v - v_xx = v~ with v(L) = v(R) = 0.
Field h1_smooth(const Field& v_tilde, const Grid& g);

}  // namespace bathy
