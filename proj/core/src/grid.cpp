#include "bathy/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "bathy/errors.hpp"

namespace bathy {

namespace {

constexpr double kPi = std::numbers::pi;

// Clenshaw-Curtis weights on [-1, 1] for the N+1 Gauss-Lobatto points.
Field clenshaw_curtis_weights(int N) {
  Field w = Field::Zero(N + 1);
  std::vector<double> v(N - 1, 1.0);
  auto theta = [N](int k) { return k * kPi / N; };
  if (N % 2 == 0) {
    w(0) = w(N) = 1.0 / (static_cast<double>(N) * N - 1.0);
    for (int k = 1; k < N / 2; ++k) {
      for (int j = 1; j < N; ++j) {
        v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
      }
    }
    for (int j = 1; j < N; ++j) {
      v[j - 1] -= std::cos(N * theta(j)) / (static_cast<double>(N) * N - 1.0);
    }
  } else {
    w(0) = w(N) = 1.0 / (static_cast<double>(N) * N);
    for (int k = 1; k <= (N - 1) / 2; ++k) {
      for (int j = 1; j < N; ++j) {
        v[j - 1] -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
      }
    }
  }
  for (int j = 1; j < N; ++j) w(j) = 2.0 * v[j - 1] / N;
  return w;
}

}  // namespace

Grid::Grid(int M, double L, double R) : left_(L), right_(R) {
  if (M < 4) {
    std::ostringstream msg;
    msg << "grid: need at least 4 nodes, got M=" << M;
    throw ConfigError(msg.str());
  }
  if (!(L < R) || !std::isfinite(L) || !std::isfinite(R)) {
    std::ostringstream msg;
    msg << "grid: need finite L < R, got L=" << L << " R=" << R;
    throw ConfigError(msg.str());
  }

  const int N = M - 1;
  const double half = 0.5 * (R - L);

  // xi_k = -cos(k pi / N), written as a sine so that the node set is exactly
  // symmetric about the midpoint.
  Field xi(M);
  for (int k = 0; k < M; ++k) xi(k) = std::sin(kPi * (2.0 * k - N) / (2.0 * N));

  nodes_.resize(M);
  for (int k = 0; k < M; ++k) nodes_(k) = L + (xi(k) + 1.0) * half;
  nodes_(0) = L;
  nodes_(N) = R;

  bary_.resize(M);
  for (int k = 0; k < M; ++k) {
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == N) w *= 0.5;
    bary_(k) = w;
  }

  // Off-diagonal entries use the trigonometric form of xi_i - xi_j to avoid
  // cancellation near the endpoints; diagonal entries by negative row sums.
  diff_.setZero(M, M);
  for (int i = 0; i < M; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j < M; ++j) {
      if (i == j) continue;
      const double ti = i * kPi / N;
      const double tj = j * kPi / N;
      const double dxi = 2.0 * std::sin(0.5 * (ti + tj)) * std::sin(0.5 * (ti - tj));
      const double entry = (bary_(j) / bary_(i)) / dxi;
      diff_(i, j) = entry;
      row_sum += entry;
    }
    diff_(i, i) = -row_sum;
  }
  diff_ /= half;

  weights_ = clenshaw_curtis_weights(N) * half;
}

Eigen::RowVectorXd Grid::evaluation_row(double x) const {
  const int M = size();
  const double tol = 1e-12 * length();
  if (!(x >= left_ - tol && x <= right_ + tol)) {
    std::ostringstream msg;
    msg << "grid: evaluation point " << x << " outside [" << left_ << ", " << right_ << "]";
    throw DomainError(msg.str());
  }
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(M);
  for (int j = 0; j < M; ++j) {
    if (x == nodes_(j)) {
      row(j) = 1.0;
      return row;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < M; ++j) {
    row(j) = bary_(j) / (x - nodes_(j));
    denom += row(j);
  }
  return row / denom;
}

Eigen::MatrixXd Grid::evaluation_matrix(std::span<const double> points) const {
  Eigen::MatrixXd E(static_cast<Eigen::Index>(points.size()), size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    E.row(static_cast<Eigen::Index>(i)) = evaluation_row(points[i]);
  }
  return E;
}

double Grid::min_spacing() const {
  double h = length();
  for (int k = 1; k < size(); ++k) h = std::min(h, nodes_(k) - nodes_(k - 1));
  return h;
}

bool Grid::same_domain(const Grid& other, double tol) const {
  const double scale = std::max(std::abs(length()), 1.0);
  return std::abs(left_ - other.left_) <= tol * scale &&
         std::abs(right_ - other.right_) <= tol * scale;
}

Grid build_grid(int M, double L, double R) { return Grid(M, L, R); }

Field differentiate(const Grid& g, const Field& f) {
  if (f.size() != g.size()) {
    std::ostringstream msg;
    msg << "differentiate: field has " << f.size() << " values, grid has " << g.size();
    throw UsageError(msg.str());
  }
  return g.diff_op() * f;
}

double integrate(const Grid& g, const Field& f) {
  if (f.size() != g.size()) {
    std::ostringstream msg;
    msg << "integrate: field has " << f.size() << " values, grid has " << g.size();
    throw UsageError(msg.str());
  }
  return g.quad_weights().dot(f);
}

Field interpolate_to_grid(const Grid& src, const Field& f, const Grid& dst) {
  if (f.size() != src.size()) {
    throw UsageError("interpolate_to_grid: field length does not match source grid");
  }
  if (!src.same_domain(dst)) {
    std::ostringstream msg;
    msg << "interpolate_to_grid: source domain [" << src.left() << ", " << src.right()
        << "] differs from destination [" << dst.left() << ", " << dst.right() << "]";
    throw UsageError(msg.str());
  }
  const Field& x = dst.nodes();
  return src.evaluation_matrix(std::span<const double>(x.data(), x.size())) * f;
}

Eigen::MatrixXd chebyshev_synthesis_matrix(const Grid& g) {
  // T_k(xi_j) with xi_j = -cos(j pi / N) equals (-1)^k cos(k j pi / N).
  const int M = g.size();
  const int N = M - 1;
  Eigen::MatrixXd S(M, M);
  for (int j = 0; j < M; ++j) {
    for (int k = 0; k < M; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      S(j, k) = sign * std::cos(static_cast<double>(k) * j * kPi / N);
    }
  }
  return S;
}

Eigen::MatrixXd chebyshev_analysis_matrix(const Grid& g) {
  const int M = g.size();
  const int N = M - 1;
  const Eigen::MatrixXd S = chebyshev_synthesis_matrix(g);
  Eigen::MatrixXd A(M, M);
  for (int k = 0; k < M; ++k) {
    const double ck = (k == 0 || k == N) ? 2.0 : 1.0;
    for (int j = 0; j < M; ++j) {
      const double cj = (j == 0 || j == N) ? 2.0 : 1.0;
      A(k, j) = 2.0 / (N * ck * cj) * S(j, k);
    }
  }
  return A;
}

Eigen::MatrixXd spectral_filter_matrix(const Grid& g, const FilterSpec& spec) {
  const int M = g.size();
  const int N = M - 1;
  const double kc = std::floor(spec.cutoff * N);
  Field sigma = Field::Ones(M);
  for (int k = 0; k < M; ++k) {
    if (k > kc) {
      const double r = (k - kc) / (N - kc);
      sigma(k) = std::exp(-spec.alpha * std::pow(r, spec.order));
    }
  }
  return chebyshev_synthesis_matrix(g) * sigma.asDiagonal() * chebyshev_analysis_matrix(g);
}

}  // namespace bathy
