#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bathy/errors.hpp"
#include "bathy/objective.hpp"
#include "bathy/optimizer.hpp"
#include "scenarios.hpp"

using namespace bathy;
using std::numbers::pi;

namespace {

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

Trajectory frozen(std::shared_ptr<const Grid> g, const State& s, double dt, int n) {
  Trajectory tr;
  tr.grid = std::move(g);
  tr.dt = dt;
  tr.n_steps = n;
  tr.t_final = n * dt;
  tr.states.assign(static_cast<std::size_t>(n) + 1, s);
  return tr;
}

ObjectiveWeights weights(double gamma, double delta, double l1 = 0.0, double l2 = 0.0) {
  ObjectiveWeights w;
  w.gamma = gamma;
  w.delta = delta;
  w.lambda1 = l1;
  w.lambda2 = l2;
  return w;
}

// Trapezoid weight of stored step n.
double time_weight(const Trajectory& tr, int n) {
  return (n == 0 || n == tr.n_steps) ? 0.5 * tr.dt : tr.dt;
}

// Band-limited direction vanishing at both ends.
Field direction(const Grid& g, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> c(0.0, 1.0);
  Field s = Field::Zero(g.size());
  for (int k = 1; k <= kmax; ++k) {
    const double ck = c(rng) / k;
    s += (ck * (k * pi * (g.nodes().array() - g.left()) / g.length()).sin()).matrix();
  }
  return s;
}

}  // namespace

TEST(ObjectiveFull, ExactDataAndZeroBottomGivesZero) {
  const auto g = scenario::flume_grid(30);
  const Trajectory tr = frozen(g, {Field::Constant(30, 0.3), Field::Zero(30)}, 0.1, 10);
  const Bathymetry b = Bathymetry::zero(*g);
  EXPECT_EQ(eval_objective_full(tr, b, surface_elevation(tr, b), ObjectiveWeights{}), 0.0);
}

TEST(ObjectiveFull, ConstantBottomLeavesL2Regulariser) {
  const auto g = scenario::flume_grid(30);
  const Trajectory tr = frozen(g, {Field::Constant(30, 0.3), Field::Zero(30)}, 0.1, 10);
  const Bathymetry b{Field::Constant(30, 0.02)};
  const ObjectiveWeights w;
  EXPECT_NEAR(eval_objective_full(tr, b, surface_elevation(tr, b), w),
              0.5 * w.lambda1 * 0.02 * 0.02 * 13.5, 1e-18);
}

TEST(ObjectiveFull, ManufacturedSineMismatch) {
  const auto g = std::make_shared<const Grid>(32, 0.0, pi);
  const double eps = 0.01;
  const Trajectory tr = frozen(g, {Field::Constant(32, 0.3), Field::Zero(32)}, 0.1, 10);
  const Bathymetry b = Bathymetry::zero(*g);
  SpaceTimeField obs = surface_elevation(tr, b);
  for (int n = 0; n <= 10; ++n) obs.row(n) -= eps * g->nodes().array().sin().matrix().transpose();
  EXPECT_NEAR(eval_objective_full(tr, b, obs, weights(1.0, 0.0)), eps * eps * pi / 4.0, 1e-8);
}

TEST(ObjectiveFull, ShapeMismatchIsUsageError) {
  const auto g = scenario::flume_grid(30);
  const Trajectory tr = frozen(g, {Field::Constant(30, 0.3), Field::Zero(30)}, 0.1, 10);
  EXPECT_THROW(eval_objective_full(tr, Bathymetry::zero(*g), SpaceTimeField::Zero(10, 30),
                                   ObjectiveWeights{}),
               UsageError);
}

TEST(ObjectiveFull, NonNegativeForRandomData) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01(0.0, 1e-3);
  const auto g = scenario::flume_grid(30);
  const Trajectory tr = frozen(g, {Field::Constant(30, 0.3), Field::Zero(30)}, 0.1, 10);
  for (int trial = 0; trial < 10; ++trial) {
    SpaceTimeField obs(11, 30);
    for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] = 0.3 + n01(rng);
    Bathymetry b{Field::Zero(30)};
    for (int k = 1; k < 29; ++k) b.values(k) = n01(rng);
    EXPECT_GT(eval_objective_full(tr, b, obs, ObjectiveWeights{}), 0.0);
  }
}

TEST(ObjectiveSensors, ZeroMismatchGivesZero) {
  const auto g = scenario::flume_grid();
  const Trajectory tr = frozen(g, {Field::Constant(68, 0.3), Field::Zero(68)}, 0.1, 10);
  const SensorLayout layout{{3.0, 6.0}, 0.045};
  EXPECT_LE(eval_objective_sensors(tr, Bathymetry::zero(*g), SpaceTimeField::Constant(11, 2, 0.3),
                                   layout, ObjectiveWeights{}),
            1e-28);
}

TEST(ObjectiveSensors, SingleSensorGaussianIntegral) {
  const auto g = std::make_shared<const Grid>(200, 0.0, 4.0);
  const double m = 0.004, T = 1.0;
  const Trajectory tr = frozen(g, {Field::Constant(200, 0.3), Field::Zero(200)}, 0.1, 10);
  const SensorLayout layout{{2.0}, 0.045};
  const SpaceTimeField obs = SpaceTimeField::Constant(11, 1, 0.3 - m);
  const double J = eval_objective_sensors(tr, Bathymetry::zero(*g), obs, layout, weights(1.0, 0.0));
  EXPECT_NEAR(J, 0.5 * T * m * m * std::sqrt(pi * 0.045), 1e-6 * J);
}

TEST(ObjectiveSensors, DistantSensorsSuperpose) {
  const auto g = std::make_shared<const Grid>(240, 0.0, 6.0);
  const Trajectory tr = frozen(g, {Field::Constant(240, 0.3), Field::Zero(240)}, 0.1, 10);
  const double m = 0.002;
  const double sep = 10.0 * std::sqrt(0.045);
  const SensorLayout one{{1.5}, 0.045};
  const SensorLayout two{{1.5, 1.5 + sep}, 0.045};
  const ObjectiveWeights w = weights(1.0, 0.5);
  const double J1 = eval_objective_sensors(tr, Bathymetry::zero(*g),
                                           SpaceTimeField::Constant(11, 1, 0.3 - m), one, w);
  const double J2 = eval_objective_sensors(tr, Bathymetry::zero(*g),
                                           SpaceTimeField::Constant(11, 2, 0.3 - m), two, w);
  EXPECT_NEAR(J2, 2.0 * J1, 1e-6 * J2);
}

TEST(ObjectiveSensors, SensorOutsideDomainIsConfigError) {
  const auto g = scenario::flume_grid();
  EXPECT_THROW(DataMisfit::sensors(g, SensorLayout{{16.0}, 0.045}, SpaceTimeField::Zero(3, 1)),
               ConfigError);
  EXPECT_THROW(DataMisfit::sensors(g, SensorLayout{{5.0, 4.0}, 0.045}, SpaceTimeField::Zero(3, 2)),
               ConfigError);
}

TEST(MismatchSource, ExactDataGivesZero) {
  const auto g = scenario::flume_grid();
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory tr = run_forward(b, scenario::wave_forcing(0.5), PhysParams{}, g, 1e-3, 0.5);
  const SpaceTimeField H = surface_elevation(tr, b);
  const AdjointForcing f = build_mismatch_source(tr, b, DataMisfit::full_field(g, H),
                                                 ObjectiveWeights{});
  EXPECT_EQ(f.source.values.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(max_abs(f.terminal_p1), 0.0);
}

TEST(MismatchSource, FullFieldTerminalAndSource) {
  const auto g = scenario::flume_grid(30);
  const Trajectory tr = frozen(g, {Field::Constant(30, 0.3), Field::Zero(30)}, 0.1, 10);
  const double c = 0.003;
  const SpaceTimeField obs = SpaceTimeField::Constant(11, 30, 0.3 - c);
  const ObjectiveWeights w;
  const AdjointForcing f =
      build_mismatch_source(tr, Bathymetry::zero(*g), DataMisfit::full_field(g, obs), w);
  EXPECT_LE((f.terminal_p1.array() - 0.5 * c).abs().maxCoeff(), 1e-15);
  EXPECT_LE((f.source.values.array() - w.gamma * c).abs().maxCoeff(), 1e-15);
}

class SourceMatchesObjectiveDerivative : public ::testing::TestWithParam<DataMisfit::Mode> {};

TEST_P(SourceMatchesObjectiveDerivative, AtInteriorAndTerminalSteps) {
  // dJ/dh_k(t_n) = time_weight(n) * w_k * source(n, k) (+ w_k * terminal_k at n = N).
  const auto g = scenario::flume_grid();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 2e-3);
  const int N = 12;
  Trajectory tr = frozen(g, {Field::Constant(68, 0.3), Field::Zero(68)}, 0.05, N);
  for (auto& s : tr.states) {
    for (int k = 1; k < 67; ++k) s.h(k) += noise(rng);
  }
  const Bathymetry b{scenario::hill(*g, 0.05)};
  const SensorLayout layout{{3.0, 4.2, 9.5}, 0.045};
  const bool sensors = GetParam() == DataMisfit::Mode::Sensors;
  SpaceTimeField obs = sensors ? SpaceTimeField::Constant(N + 1, 3, 0.3)
                               : SpaceTimeField::Constant(N + 1, 68, 0.3);
  for (Eigen::Index i = 0; i < obs.size(); ++i) obs.data()[i] += noise(rng);
  const DataMisfit misfit = sensors ? DataMisfit::sensors(g, layout, obs)
                                    : DataMisfit::full_field(g, obs);
  const ObjectiveWeights w;
  const AdjointForcing f = misfit.adjoint_forcing(tr, b, w);

  for (int n : {3, N}) {
    for (int k : {5, 20, 26, 40, 60}) {
      const double eps = 1e-6;
      Trajectory plus = tr, minus = tr;
      plus.states[n].h(k) += eps;
      minus.states[n].h(k) -= eps;
      const double fd = (misfit.evaluate(plus, b, w) - misfit.evaluate(minus, b, w)) / (2 * eps);
      double an = time_weight(tr, n) * g->quad_weights()(k) * f.source.values(n, k);
      if (n == N) an += g->quad_weights()(k) * f.terminal_p1(k);
      EXPECT_NEAR(an, fd, 1e-6 * std::abs(fd) + 1e-14) << "n " << n << " k " << k;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, SourceMatchesObjectiveDerivative,
                         ::testing::Values(DataMisfit::Mode::FullField, DataMisfit::Mode::Sensors),
                         [](const auto& info) {
                           return info.param == DataMisfit::Mode::FullField ? "FullField" : "Sensors";
                         });

TEST(MismatchSource, SensorSourceIsBumpAtSensor) {
  const auto g = scenario::flume_grid();
  const Trajectory tr = frozen(g, {Field::Constant(68, 0.3), Field::Zero(68)}, 0.1, 4);
  const SpaceTimeField obs = SpaceTimeField::Constant(5, 1, 0.3 - 1.0);
  const DataMisfit misfit = DataMisfit::sensors(g, SensorLayout{{4.0}, 0.045}, obs);
  const AdjointForcing f = misfit.adjoint_forcing(tr, Bathymetry::zero(*g), ObjectiveWeights{});
  Eigen::Index peak = 0;
  const double top = f.source.values.row(2).cwiseAbs().maxCoeff(&peak);
  EXPECT_LT(std::abs(g->nodes()(peak) - 4.0), 0.3);
  EXPECT_GT(f.source.values(2, peak), 0.0);
  // The point evaluation enters through its Lagrange weights, so the far
  // field carries a small alternating tail rather than exact zeros.
  for (int k = 1; k < 67; ++k) {
    if (std::abs(g->nodes()(k) - 4.0) > 3.0) {
      EXPECT_LT(std::abs(f.source.values(2, k)), 0.05 * top);
    }
  }
}

TEST(AssembleGradient, ExactDataZeroBottomVanishes) {
  const auto g = scenario::flume_grid();
  const Bathymetry b = Bathymetry::zero(*g);
  const PhysParams p;
  const Trajectory tr = run_forward(b, scenario::wave_forcing(0.5), p, g, 1e-3, 0.5);
  const DataMisfit misfit = DataMisfit::full_field(g, surface_elevation(tr, b));
  const ObjectiveWeights w;
  const AdjointForcing f = misfit.adjoint_forcing(tr, b, w);
  const AdjointTrajectory adj = run_adjoint(tr, f.source, f.terminal_p1, p);
  EXPECT_EQ(max_abs(assemble_l2_gradient(tr, adj, b, f.terminal_p1, w)), 0.0);
}

TEST(AssembleGradient, ExactDataConstantBottomLeavesRegulariser) {
  const auto g = scenario::flume_grid();
  const Bathymetry b{Field::Constant(68, 0.01)};
  const PhysParams p;
  const Trajectory tr = run_forward(b, scenario::wave_forcing(0.5), p, g, 1e-3, 0.5);
  const DataMisfit misfit = DataMisfit::full_field(g, surface_elevation(tr, b));
  const ObjectiveWeights w;
  const AdjointForcing f = misfit.adjoint_forcing(tr, b, w);
  const AdjointTrajectory adj = run_adjoint(tr, f.source, f.terminal_p1, p);
  const Field v = assemble_l2_gradient(tr, adj, b, f.terminal_p1, w);
  EXPECT_LE((v.array() - w.lambda1 * 0.01).abs().maxCoeff(), 1e-15);
}

class GradientCheck : public ::testing::TestWithParam<DataMisfit::Mode> {};

TEST_P(GradientCheck, MatchesCentralDifferences) {
  const auto g = scenario::flume_grid();
  const PhysParams p;
  const double T = 1.0, dt = 1e-3;
  const BoundaryForcing forcing = scenario::wave_forcing(T);
  const Bathymetry truth{scenario::hill(*g)};
  const Trajectory obs_run = run_forward(truth, forcing, p, g, dt, T);
  const SpaceTimeField H = surface_elevation(obs_run, truth);
  const SensorLayout layout{{2.5, 5.5, 8.0}, 0.045};
  DataMisfit misfit = DataMisfit::full_field(g, H);
  if (GetParam() == DataMisfit::Mode::Sensors) {
    SpaceTimeField s(H.rows(), 3);
    for (int i = 0; i < 3; ++i) s.col(i) = H * g->evaluation_row(layout.positions[i]).transpose();
    misfit = DataMisfit::sensors(g, layout, s);
  }
  const InverseProblem problem{g, forcing, p, ObjectiveWeights{}, misfit, dt, T};
  const Bathymetry b = Bathymetry::zero(*g);
  const ObjectiveEvaluation base = evaluate_objective(problem, b);
  const GradientFields grad = compute_gradient(problem, b, base.trajectory, H1Smoother(*g));

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3; ++trial) {
    const Field s = direction(*g, rng, 4);
    const double eps = 1e-6;
    const double jp = evaluate_objective(problem, {b.values + eps * s}).objective;
    const double jm = evaluate_objective(problem, {b.values - eps * s}).objective;
    const double fd = (jp - jm) / (2 * eps);
    const double an = integrate(*g, grad.v_l2.cwiseProduct(s));
    EXPECT_LE(std::abs(an - fd) / std::abs(fd), 0.05) << "adjoint " << an << " fd " << fd;
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, GradientCheck,
                         ::testing::Values(DataMisfit::Mode::FullField, DataMisfit::Mode::Sensors),
                         [](const auto& info) {
                           return info.param == DataMisfit::Mode::FullField ? "FullField" : "Sensors";
                         });

TEST(H1Smooth, ZeroInZeroOut) {
  const Grid g(68, 1.5, 15.0);
  EXPECT_EQ(max_abs(h1_smooth(Field::Zero(68), g)), 0.0);
}

TEST(H1Smooth, DirichletEigenfunctions) {
  const Grid g(68, 1.5, 15.0);
  for (int k : {1, 2, 5}) {
    const double kk = k * pi / g.length();
    const Field vt = (kk * (g.nodes().array() - g.left())).sin().matrix();
    EXPECT_LE(max_abs(h1_smooth(vt, g) - vt / (1.0 + kk * kk)), 1e-8) << "k = " << k;
  }
}

TEST(H1Smooth, ReflectionSymmetry) {
  const Grid g(68, 1.5, 15.0);
  const double mid = 0.5 * (g.left() + g.right());
  const Field vt = (-(g.nodes().array() - mid).square()).exp().matrix() + Field::Constant(68, 0.2);
  const Field v = h1_smooth(vt, g);
  EXPECT_LE(max_abs(v - v.reverse()), 1e-10);
}

TEST(H1Smooth, EndpointsLinearityPositivity) {
  const Grid g(68, 1.5, 15.0);
  const H1Smoother smooth(g);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Field a(68), b(68);
    for (int k = 0; k < 68; ++k) {
      a(k) = n01(rng);
      b(k) = n01(rng);
    }
    const Field va = smooth(a), vb = smooth(b);
    EXPECT_EQ(va(0), 0.0);
    EXPECT_EQ(va(67), 0.0);
    EXPECT_LE(max_abs(smooth(2.0 * a - b) - (2.0 * va - vb)), 1e-10 * max_abs(va));
    EXPECT_GT(integrate(g, va.cwiseProduct(a)), 0.0);
  }
}

TEST(Weights, Validation) {
  EXPECT_NO_THROW(ObjectiveWeights{}.validate());
  ObjectiveWeights w;
  w.lambda2 = 0.0;
  EXPECT_THROW(w.validate(), ConfigError);
  w = ObjectiveWeights{};
  w.gamma = -1.0;
  EXPECT_THROW(w.validate(), ConfigError);
}
