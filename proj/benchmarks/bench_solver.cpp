#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "bathy/adjoint.hpp"
#include "bathy/objective.hpp"
#include "bathy/swe_forward.hpp"

using namespace bathy;

namespace {

std::shared_ptr<const Grid> grid(int M) { return std::make_shared<const Grid>(M, 1.5, 15.0); }

BoundaryForcing waves(double T) {
  std::vector<double> t, h;
  for (int i = 0; i <= static_cast<int>((T + 1.0) * 100); ++i) {
    t.push_back(0.01 * i);
    h.push_back(0.3 + 0.008 * std::sin(3.14 * t.back()) * (1.0 - std::exp(-t.back())));
  }
  return BoundaryForcing(SampledCurve(t, h));
}

Field hill(const Grid& g) {
  return g.nodes().unaryExpr([](double x) { return 0.1 * std::exp(-2.0 * (x - 4.0) * (x - 4.0)); });
}

}  // namespace

static void BM_SweRhs(benchmark::State& state) {
  const auto g = grid(static_cast<int>(state.range(0)));
  const SweOperator op(g, PhysParams{});
  const Field b = hill(*g);
  const State s{Field::Constant(g->size(), 0.3) - b, Field::Constant(g->size(), 0.01)};
  for (auto _ : state) benchmark::DoNotOptimize(op.rhs(s, b));
}
BENCHMARK(BM_SweRhs)->Arg(68)->Arg(100)->Arg(200);

static void BM_RunForward(benchmark::State& state) {
  const auto g = grid(static_cast<int>(state.range(0)));
  const Bathymetry b{hill(*g)};
  const BoundaryForcing f = waves(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_forward(b, f, PhysParams{}, g, 1e-3, 1.0));
}
BENCHMARK(BM_RunForward)->Arg(68)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_RunAdjoint(benchmark::State& state) {
  const auto g = grid(68);
  const Bathymetry b{hill(*g)};
  const Trajectory fwd = run_forward(b, waves(1.0), PhysParams{}, g, 1e-3, 1.0);
  const MismatchSource src{SpaceTimeField::Constant(fwd.n_steps + 1, g->size(), 1e-3)};
  const Field terminal = Field::Zero(g->size());
  for (auto _ : state) benchmark::DoNotOptimize(run_adjoint(fwd, src, terminal, PhysParams{}));
}
BENCHMARK(BM_RunAdjoint)->Unit(benchmark::kMillisecond);

static void BM_H1Smooth(benchmark::State& state) {
  const auto g = grid(68);
  const H1Smoother smooth(*g);
  const Field v = hill(*g);
  for (auto _ : state) benchmark::DoNotOptimize(smooth(v));
}
BENCHMARK(BM_H1Smooth);

BENCHMARK_MAIN();
