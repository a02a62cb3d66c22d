#pragma once

#include "inflap/geometry.hpp"
#include "inflap/solver.hpp"

namespace inflap {

struct EpsilonSchedule {
  double eps0 = 0.1;
  double factor = 0.5;
  int count = 5;

  std::vector<double> values() const;
  // every eps_k must stay resolvable: eps_k >= 2h
  void validate(const Grid& g) const;
};

struct InclusionDefect {
  double defect_a = 0.0;  // {u0 > 0} into the neighborhood of {u_eps > C1 eps}
  double defect_b = 0.0;  // {u_eps > C1 eps} into the neighborhood of {u0 > 0}
  bool vacuous = false;
};

// Hausdorff-style one-sided defects between the positivity sets, measured on
// the margin subdomain.
InclusionDefect inclusion_defect(const ScalarField& u_eps,
                                 const ScalarField& u0, double eps, double C1,
                                 double margin);

struct LimitReport {
  std::vector<double> eps_values;
  std::vector<double> sup_diffs;  // consecutive solution differences
  std::vector<GeometryReport> geometry;
  std::vector<InclusionDefect> defects;  // per eps, against u0
  std::vector<SolveReport> solve_reports;
  ScalarField u0;
  double C1 = 2.0;
  bool all_converged = false;
  bool bounds_ok = false;          // 0 <= u0 <= sup phi
  double positivity_residual = 0.0;  // max |D_inf u0 - g| on {u0 > 2 eps_tail}

  explicit LimitReport(const Grid& g) : u0(g) {}
};

struct ContinuationOptions {
  SolverOptions solver;
  GeometryOptions geometry;
  double C1 = 2.0;
  double stability_factor = 2.0;
};

// Drives eps -> 0 over the schedule with warm starts, measuring geometry per
// eps and the limit diagnostics on the final iterate. A caller who already
// solved the first level can pass that field as init to skip the cold solve.
LimitReport run_continuation(const DirichletProblem& problem,
                             const EpsilonSchedule& schedule,
                             const ContinuationOptions& opts,
                             const ScalarField* init = nullptr);

// Geometry of the designated limit field with eps = 0 conventions.
GeometryReport limit_geometry(const ScalarField& u0, const StencilOperator& op,
                              const GeometryOptions& opts);

// max/min of the positive entries; 0 if none. Used for the "uniform in eps"
// stability factor checks.
double stability_ratio(const std::vector<double>& values);

}  // namespace inflap
