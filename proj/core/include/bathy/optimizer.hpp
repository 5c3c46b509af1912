#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "bathy/objective.hpp"

namespace bathy {

/// Which quantity the stopping rule measures.
enum class GradientNorm {
  SmoothedL2,  // quadrature-weighted L2 norm of the H1 gradient v
  NodalRaw,    // plain l2 norm of the nodal L2 gradient v~
};

struct OptimizerConfig {
  double epsilon = 1e-3;
  int max_iters = 200;
  double armijo_c = 1e-4;
  double armijo_beta = 0.5;
  double a_init = 1.0;
  double a_min = 1e-12;
  GradientNorm norm = GradientNorm::SmoothedL2;
  /// Start each line search after the first at the previous accepted step
  /// divided by beta instead of at a_init.
  bool warm_start = true;

  void validate() const;
};

enum class Termination { GradientTolerance, NoDescentStep, MaxIters };

std::string_view to_string(Termination t);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;  // accepted step; 0 on the final record
  int trials = 0;     // line-search trials spent in this iteration
};

struct ReconstructionResult {
  Bathymetry b_final;
  std::vector<IterationRecord> history;
  Termination termination = Termination::MaxIters;
};

struct LineSearchResult {
  bool accepted = false;
  double step = 0.0;
  double objective = 0.0;
  int trials = 0;
};

/// Backtracking over a_init * beta^k until
///   phi(a) <= J_current - c * a * slope
/// where phi(a) = J(b - a v) and slope = ||v||^2. A trial returning nullopt
/// (forward failure) is a rejection. Stops unsuccessfully once a < a_min;
/// throws NumericalFailure if every trial failed to evaluate.
LineSearchResult armijo_search(const std::function<std::optional<double>(double)>& phi,
                               double J_current, double slope, const OptimizerConfig& cfg);

/// Everything needed to evaluate J(b) and its gradient on one discretisation.
struct InverseProblem {
  std::shared_ptr<const Grid> grid;
  BoundaryForcing forcing;
  PhysParams params;
  ObjectiveWeights weights;
  DataMisfit misfit;
  double dt = 1e-3;
  double T = 1.0;
};

struct ObjectiveEvaluation {
  double objective = 0.0;
  Trajectory trajectory;
};

ObjectiveEvaluation evaluate_objective(const InverseProblem& problem, const Bathymetry& b);

/// Adjoint solve, L2 gradient and its H1 smoothing at b.
GradientFields compute_gradient(const InverseProblem& problem, const Bathymetry& b,
                                const Trajectory& fwd, const H1Smoother& smoother);

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Steepest descent in the H1 metric with Armijo backtracking.
ReconstructionResult reconstruct(const InverseProblem& problem, const Bathymetry& initial_b,
                                 const OptimizerConfig& cfg,
                                 const IterationObserver& observer = {});

}  // namespace bathy
