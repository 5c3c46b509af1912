#pragma once

#include <span>

#include <Eigen/Dense>

namespace bathy {

using Field = Eigen::VectorXd;

/// Time-by-node array: row n holds a field at time step n.
using SpaceTimeField =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Chebyshev-Gauss-Lobatto collocation grid on [L, R].
///
/// Nodes are sorted increasingly with nodes[0] = L and nodes[M-1] = R. The
/// grid owns the dense first-derivative matrix, Clenshaw-Curtis quadrature
/// weights and the barycentric weights used for point evaluation. Immutable
/// after construction.
class Grid {
 public:
  Grid(int M, double L, double R);

  int size() const { return static_cast<int>(nodes_.size()); }
  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }

  const Field& nodes() const { return nodes_; }
  const Eigen::MatrixXd& diff_op() const { return diff_; }
  const Field& quad_weights() const { return weights_; }
  const Field& barycentric_weights() const { return bary_; }

  /// Row vector e with e . f = p(x), where p interpolates f at the nodes.
  Eigen::RowVectorXd evaluation_row(double x) const;

  /// Interpolation matrix from this grid's nodal values to arbitrary points.
  Eigen::MatrixXd evaluation_matrix(std::span<const double> points) const;

  /// Minimum spacing between adjacent nodes.
  double min_spacing() const;

  bool same_domain(const Grid& other, double tol = 1e-12) const;

 private:
  double left_;
  double right_;
  Field nodes_;
  Eigen::MatrixXd diff_;
  Field weights_;
  Field bary_;
};

Grid build_grid(int M, double L, double R);

Field differentiate(const Grid& g, const Field& f);

double integrate(const Grid& g, const Field& f);

/// Evaluates the polynomial interpolant of f (nodal on src) at dst's nodes.
Field interpolate_to_grid(const Grid& src, const Field& f, const Grid& dst);

/// Exponential modal filter acting on nodal values.
///
/// Modes k <= cutoff * (M-1) pass unchanged; higher modes are scaled by
/// exp(-alpha * ((k - kc) / (N - kc))^order).
struct FilterSpec {
  int order = 8;
  double cutoff = 2.0 / 3.0;
  double alpha = 36.0;
};

Eigen::MatrixXd spectral_filter_matrix(const Grid& g, const FilterSpec& spec = {});

/// Nodal values -> Chebyshev coefficients, and back.
Eigen::MatrixXd chebyshev_analysis_matrix(const Grid& g);
Eigen::MatrixXd chebyshev_synthesis_matrix(const Grid& g);

}  // namespace bathy
