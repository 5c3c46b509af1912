#include "bathy/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bathy/errors.hpp"

namespace bathy {

void OptimizerConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("optimizer.epsilon must be positive");
  if (max_iters < 0) throw ConfigError("optimizer.max_iters must be >= 0");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("optimizer.armijo_c must be in (0, 1)");
  if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) {
    throw ConfigError("optimizer.armijo_beta must be in (0, 1)");
  }
  if (!(a_min > 0.0) || !(a_min < a_init)) {
    throw ConfigError("optimizer: need 0 < a_min < a_init");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::GradientTolerance:
      return "GradientTolerance";
    case Termination::NoDescentStep:
      return "NoDescentStep";
    case Termination::MaxIters:
      return "MaxIters";
  }
  return "Unknown";
}

LineSearchResult armijo_search(const std::function<std::optional<double>(double)>& phi,
                               double J_current, double slope, const OptimizerConfig& cfg) {
  if (!(slope > 0.0)) throw UsageError("armijo_search: descent direction must be nonzero");
  LineSearchResult result;
  int evaluated = 0;
  for (double a = cfg.a_init; a >= cfg.a_min; a *= cfg.armijo_beta) {
    ++result.trials;
    const std::optional<double> J = phi(a);
    if (!J || !std::isfinite(*J)) continue;
    ++evaluated;
    if (*J <= J_current - cfg.armijo_c * a * slope) {
      result.accepted = true;
      result.step = a;
      result.objective = *J;
      return result;
    }
  }
  if (evaluated == 0) {
    std::ostringstream msg;
    msg << "line search: all " << result.trials << " trial forward solves failed";
    throw NumericalFailure(msg.str());
  }
  return result;
}

ObjectiveEvaluation evaluate_objective(const InverseProblem& problem, const Bathymetry& b) {
  ObjectiveEvaluation out;
  out.trajectory = run_forward(b, problem.forcing, problem.params, problem.grid, problem.dt,
                               problem.T);
  out.objective = problem.misfit.evaluate(out.trajectory, b, problem.weights) +
                  regularisation(*problem.grid, b, problem.weights);
  return out;
}

GradientFields compute_gradient(const InverseProblem& problem, const Bathymetry& b,
                                const Trajectory& fwd, const H1Smoother& smoother) {
  const AdjointForcing forcing = build_mismatch_source(fwd, b, problem.misfit, problem.weights);
  const AdjointTrajectory adj = run_adjoint(fwd, forcing.source, forcing.terminal_p1,
                                            problem.params);
  GradientFields grad;
  grad.v_l2 = assemble_l2_gradient(fwd, adj, b, forcing.terminal_p1, problem.weights);
  grad.v_h1 = smoother(grad.v_l2);
  return grad;
}

ReconstructionResult reconstruct(const InverseProblem& problem, const Bathymetry& initial_b,
                                 const OptimizerConfig& cfg, const IterationObserver& observer) {
  cfg.validate();
  problem.params.validate();
  problem.weights.validate();
  const Grid& grid = *problem.grid;
  if (initial_b.values.size() != grid.size()) {
    throw UsageError("reconstruct: initial bathymetry does not match the grid");
  }
  const H1Smoother smoother(grid);
  const Field& w = grid.quad_weights();

  ReconstructionResult result;
  Bathymetry b = initial_b;
  OptimizerConfig search = cfg;

  ObjectiveEvaluation current;
  try {
    current = evaluate_objective(problem, b);
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(std::string("reconstruct: forward solve failed at the initial iterate: ") +
                           e.what());
  }

  auto emit = [&](const IterationRecord& rec) {
    result.history.push_back(rec);
    if (observer) observer(rec);
  };

  for (int it = 0;; ++it) {
    const GradientFields grad = compute_gradient(problem, b, current.trajectory, smoother);
    const Field& v = grad.v_h1;
    const double v_sq = v.cwiseProduct(v).dot(w);
    const double norm = cfg.norm == GradientNorm::SmoothedL2 ? std::sqrt(v_sq) : grad.v_l2.norm();

    IterationRecord rec{it, current.objective, norm, 0.0, 0};
    if (norm < cfg.epsilon || !(v_sq > 0.0)) {
      emit(rec);
      result.termination = Termination::GradientTolerance;
      break;
    }
    if (it >= cfg.max_iters) {
      emit(rec);
      result.termination = Termination::MaxIters;
      break;
    }

    std::optional<Trajectory> accepted_traj;
    auto phi = [&](double a) -> std::optional<double> {
      Bathymetry trial{b.values - a * v};
      try {
        ObjectiveEvaluation e = evaluate_objective(problem, trial);
        const double J = e.objective;
        accepted_traj = std::move(e.trajectory);
        return J;
      } catch (const NumericalFailure&) {
        return std::nullopt;
      }
    };
    const LineSearchResult ls = armijo_search(phi, current.objective, v_sq, search);
    rec.trials = ls.trials;
    if (!ls.accepted) {
      emit(rec);
      result.termination = Termination::NoDescentStep;
      break;
    }
    rec.step = ls.step;
    emit(rec);
    if (cfg.warm_start) search.a_init = std::max(ls.step / cfg.armijo_beta, 2.0 * cfg.a_min);

    b.values -= ls.step * v;
    current.objective = ls.objective;
    current.trajectory = std::move(*accepted_traj);
  }

  result.b_final = std::move(b);
  return result;
}

}  // namespace bathy
