#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bathy/errors.hpp"
#include "bathy/swe_forward.hpp"
#include "scenarios.hpp"

using namespace bathy;
using std::numbers::pi;

namespace {

double max_abs(const Field& f) { return f.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SweRhs, LakeAtRestIsSteady) {
  const auto g = scenario::flume_grid();
  const PhysParams p;
  const double C = 0.3;
  const Bathymetry b{scenario::hill(*g)};
  const State s{Field::Constant(68, C) - b.values, Field::Zero(68)};
  const Tendency t = swe_rhs(s, b, p, g);
  EXPECT_LE(max_abs(t.dh), 1e-10 * p.g * C);
  EXPECT_LE(max_abs(t.du), 1e-10 * p.g * C);
}

TEST(SweRhs, UniformFlowFeelsOnlyFriction) {
  const auto g = scenario::flume_grid(40);
  const PhysParams p;
  const State s{Field::Constant(40, 0.25), Field::Constant(40, 0.07)};
  const Tendency t = swe_rhs(s, Bathymetry::zero(*g), p, g);
  EXPECT_LE(max_abs(t.dh), 1e-12);
  EXPECT_LE(max_abs(t.du.array() + p.kappa * 0.07), 1e-12);
}

class Manufactured : public ::testing::TestWithParam<bool> {};

TEST_P(Manufactured, MatchesAnalyticTendencies) {
  const auto g = std::make_shared<const Grid>(40, 0.0, 2 * pi);
  PhysParams p;
  p.dealias = GetParam();
  const Field& x = g->nodes();
  const State s{(1.0 + 0.1 * x.array().sin()).matrix(), (0.1 * x.array().cos()).matrix()};
  const Tendency t = swe_rhs(s, Bathymetry::zero(*g), p, g);

  const Field dh = (0.1 * x.array().sin() - 0.01 * (2 * x.array()).cos()).matrix();
  const Field du = (0.02 * x.array().sin() * x.array().cos() - p.g * 0.1 * x.array().cos() -
                    p.kappa * 0.1 * x.array().cos())
                       .matrix();
  EXPECT_LE(max_abs(t.dh - dh), 1e-6);
  EXPECT_LE(max_abs(t.du - du), 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Dealias, Manufactured, ::testing::Bool());

TEST(SweRhs, NonFiniteInputIsNumericalFailure) {
  const auto g = scenario::flume_grid(20);
  State s{Field::Constant(20, 0.3), Field::Zero(20)};
  s.u(5) = std::nan("");
  EXPECT_THROW(swe_rhs(s, Bathymetry::zero(*g), PhysParams{}, g), NumericalFailure);
}

TEST(ForwardBcs, Examples) {
  const auto g = scenario::flume_grid(20);
  const BoundaryForcing f = scenario::constant_forcing(0.3, 1.0);
  State s{Field::Constant(20, 0.2), Field::Constant(20, 0.5)};

  State a = apply_forward_bcs(s, f, Bathymetry::zero(*g), 0.5);
  EXPECT_DOUBLE_EQ(a.h(0), 0.3);
  EXPECT_EQ(a.u(19), 0.0);
  EXPECT_EQ(a.h.tail(19), s.h.tail(19));
  EXPECT_EQ(a.u.head(19), s.u.head(19));

  Bathymetry b = Bathymetry::zero(*g);
  b.values(0) = 0.05;
  EXPECT_DOUBLE_EQ(apply_forward_bcs(s, f, b, 0.5).h(0), 0.25);

  b.values(0) = 0.3;
  EXPECT_THROW(apply_forward_bcs(s, f, b, 0.5), NumericalFailure);
}

TEST(RunForward, LakeAtRestPersists) {
  const auto g = scenario::flume_grid();
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory tr = run_forward(b, scenario::constant_forcing(0.3, 1.0), PhysParams{}, g,
                                    1e-3, 1.0);
  ASSERT_EQ(tr.n_steps, 1000);
  ASSERT_EQ(tr.states.size(), 1001u);
  EXPECT_LE(max_abs(tr.states.back().h - tr.states.front().h), 1e-8);
  EXPECT_LE(max_abs(tr.states.back().u), 1e-9);
}

TEST(RunForward, WellBalancedForRandomSmoothBottoms) {
  const auto g = scenario::flume_grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> height(-0.1, 0.2), centre(3.0, 12.0), width(0.3, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    const Bathymetry b{scenario::hill(*g, height(rng), centre(rng), width(rng))};
    ASSERT_GE((0.3 - b.values.array()).minCoeff(), 0.05);
    const Trajectory tr = run_forward(b, scenario::constant_forcing(0.3, 1.0), PhysParams{}, g,
                                      1e-3, 1.0);
    double drift = 0.0;
    for (const State& s : tr.states) drift = std::max(drift, max_abs(s.u));
    EXPECT_LE(drift, 1e-9);
  }
}

TEST(RunForward, RestStateConservesMassWithoutFriction) {
  const auto g = scenario::flume_grid();
  PhysParams p;
  p.kappa = 0.0;
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory tr = run_forward(b, scenario::constant_forcing(0.3, 0.5), p, g, 1e-3, 0.5);
  const double m0 = integrate(*g, tr.states.front().h);
  for (const State& s : tr.states) EXPECT_NEAR(integrate(*g, s.h), m0, 1e-8);
}

TEST(RunForward, BoundaryCompliance) {
  const auto g = scenario::flume_grid();
  const BoundaryForcing f = scenario::wave_forcing(2.0);
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory tr = run_forward(b, f, PhysParams{}, g, 1e-3, 2.0);
  for (int n = 0; n <= tr.n_steps; ++n) {
    EXPECT_EQ(tr.states[n].u(67), 0.0);
    EXPECT_EQ(tr.states[n].h(0), f.surface_at(tr.time(n)) - b.values(0));
  }
}

TEST(RunForward, IsDeterministic) {
  const auto g = scenario::flume_grid();
  const BoundaryForcing f = scenario::wave_forcing(1.0);
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory a = run_forward(b, f, PhysParams{}, g, 1e-3, 1.0);
  const Trajectory c = run_forward(b, f, PhysParams{}, g, 1e-3, 1.0);
  for (std::size_t n = 0; n < a.states.size(); ++n) {
    ASSERT_EQ(a.states[n].h, c.states[n].h);
    ASSERT_EQ(a.states[n].u, c.states[n].u);
  }
}

TEST(RunForward, StoreStrideKeepsEveryKthStep) {
  const auto g = scenario::flume_grid(30);
  const BoundaryForcing f = scenario::wave_forcing(0.2);
  const Bathymetry b = Bathymetry::zero(*g);
  const Trajectory full = run_forward(b, f, PhysParams{}, g, 1e-3, 0.2);
  ForwardOptions opts;
  opts.store_stride = 4;
  const Trajectory thin = run_forward(b, f, PhysParams{}, g, 1e-3, 0.2, opts);
  ASSERT_EQ(thin.n_steps, 50);
  EXPECT_DOUBLE_EQ(thin.dt, 4e-3);
  for (int n = 0; n <= 50; ++n) EXPECT_EQ(thin.states[n].h, full.states[4 * n].h);
}

TEST(RunForward, SelfConvergenceAtSensorPoint) {
  const BoundaryForcing f = scenario::wave_forcing(4.0);
  auto series_at = [&](int M, double dt) {
    const auto g = scenario::flume_grid(M);
    Bathymetry b{scenario::hill(*g)};
    const Trajectory tr = run_forward(b, f, PhysParams{}, g, dt, 4.0);
    const SpaceTimeField H = surface_elevation(tr, b);
    const Eigen::RowVectorXd e = g->evaluation_row(4.0);
    const int stride = static_cast<int>(std::lround(1e-3 / dt));
    Field out(4001);
    for (int n = 0; n <= 4000; ++n) out(n) = e.dot(H.row(n * stride));
    return out;
  };
  const Field coarse = series_at(68, 1e-3);
  const Field fine = series_at(100, 2.5e-4);
  EXPECT_LE((coarse - fine).norm() / fine.norm(), 5e-3);
}

TEST(RunForward, SelfConvergenceOfTerminalState) {
  const BoundaryForcing f = scenario::wave_forcing(2.0);
  const PhysParams p;
  auto terminal = [&](int M, double dt) {
    const auto g = scenario::flume_grid(M);
    const Bathymetry b{scenario::hill(*g)};
    return std::pair{g, run_forward(b, f, p, g, dt, 2.0).states.back()};
  };
  const auto [g0, s0] = terminal(68, 1e-3);
  const auto [g1, s1] = terminal(102, 5e-4);
  const auto [gr, sr] = terminal(136, 2.5e-4);
  auto diff = [&](const Grid& g, const State& s) {
    const Field h = interpolate_to_grid(g, s.h, *gr) - sr.h;
    const Field u = interpolate_to_grid(g, s.u, *gr) - sr.u;
    return std::sqrt(h.squaredNorm() + u.squaredNorm());
  };
  const double e0 = diff(*g0, s0), e1 = diff(*g1, s1);
  EXPECT_GT(e0, 0.0);
  EXPECT_LE(e1, 0.5 * e0) << "coarse " << e0 << " refined " << e1;
}

TEST(RunForward, DryNodeIsNumericalFailureWithStep) {
  const auto g = scenario::flume_grid();
  const Bathymetry b{scenario::hill(*g, 0.35)};
  try {
    run_forward(b, scenario::constant_forcing(0.3, 1.0), PhysParams{}, g, 1e-3, 1.0);
    FAIL() << "expected NumericalFailure";
  } catch (const NumericalFailure& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos) << e.what();
  }
}

TEST(RunForward, CflWarningIsReported) {
  const auto g = scenario::flume_grid();
  int warnings = 0;
  ForwardOptions opts;
  opts.warn = [&](std::string_view) { ++warnings; };
  try {
    run_forward(Bathymetry::zero(*g), scenario::constant_forcing(0.3, 1.0), PhysParams{}, g, 0.05,
                0.1, opts);
  } catch (const NumericalFailure&) {
  }
  EXPECT_GE(warnings, 1);
}

TEST(RunForward, RejectsIncommensurateHorizonAndShortForcing) {
  const auto g = scenario::flume_grid(20);
  EXPECT_THROW(run_forward(Bathymetry::zero(*g), scenario::constant_forcing(0.3, 1.0),
                           PhysParams{}, g, 3e-3, 1.0),
               ConfigError);
  EXPECT_THROW(run_forward(Bathymetry::zero(*g), scenario::constant_forcing(0.3, 1.0),
                           PhysParams{}, g, 1e-3, 5.0),
               DomainError);
}

TEST(SurfaceElevation, Examples) {
  const auto g = std::make_shared<const Grid>(4, 0.0, 1.0);
  Trajectory tr;
  tr.grid = g;
  tr.dt = 1.0;
  tr.n_steps = 0;
  tr.states.push_back({Field::Constant(4, 0.3), Field::Zero(4)});
  Bathymetry b{Field::Zero(4)};
  EXPECT_EQ(surface_elevation(tr, b).row(0).transpose(), tr.states[0].h);
  b.values << 0.0, 0.1, 0.1, 0.0;
  const SpaceTimeField H = surface_elevation(tr, b);
  EXPECT_DOUBLE_EQ(H(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(H(0, 1), 0.4);
}

TEST(SurfaceElevation, LakeAtRestIsFlat) {
  const auto g = scenario::flume_grid();
  const Bathymetry b{scenario::hill(*g)};
  const Trajectory tr = run_forward(b, scenario::constant_forcing(0.3, 0.2), PhysParams{}, g,
                                    1e-3, 0.2);
  const SpaceTimeField H = surface_elevation(tr, b);
  EXPECT_LE((H.array() - 0.3).abs().maxCoeff(), 1e-12);
}

TEST(StepCount, ExactMultiplesOnly) {
  EXPECT_EQ(step_count(1e-3, 10.0), 10000);
  EXPECT_EQ(step_count(5e-5, 2.0), 40000);
  EXPECT_THROW(step_count(3e-3, 1.0), ConfigError);
  EXPECT_THROW(step_count(0.0, 1.0), ConfigError);
}

TEST(PhysParams, Validation) {
  PhysParams p;
  EXPECT_NO_THROW(p.validate());
  p.kappa = 0.0;
  EXPECT_NO_THROW(p.validate());
  p.kappa = -0.1;
  EXPECT_THROW(p.validate(), ConfigError);
  p = PhysParams{};
  p.g = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
}
