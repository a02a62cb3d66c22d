#include "inflap/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inflap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::vector<double> EpsilonSchedule::values() const {
  if (!(eps0 > 0.0) || !(factor > 0.0 && factor < 1.0) || count < 1) {
    throw std::invalid_argument("EpsilonSchedule: invalid parameters");
  }
  std::vector<double> out(count);
  double e = eps0;
  for (int k = 0; k < count; ++k) {
    out[k] = e;
    e *= factor;
  }
  return out;
}

void EpsilonSchedule::validate(const Grid& g) const {
  for (double e : values()) {
    if (e < 2.0 * g.h() - 1e-12) {
      throw std::invalid_argument(
          "EpsilonSchedule: eps below the resolvable threshold 2h");
    }
  }
}

InclusionDefect inclusion_defect(const ScalarField& u_eps,
                                 const ScalarField& u0, double eps, double C1,
                                 double margin) {
  if (!(C1 > 1.0)) throw std::invalid_argument("inclusion_defect: C1 > 1");
  const Grid& g = u0.grid;
  const Subdomain sub(g, margin);
  std::vector<Point> pos_u0, pos_eps;
  std::vector<std::size_t> nodes_u0, nodes_eps;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const bool in = sub.contains(k);
    if (u0[k] > 0.0) {
      pos_u0.push_back(g.coords(k));
      if (in) nodes_u0.push_back(k);
    }
    if (u_eps[k] > C1 * eps) {
      pos_eps.push_back(g.coords(k));
      if (in) nodes_eps.push_back(k);
    }
  }
  InclusionDefect out;
  if (nodes_u0.empty() || nodes_eps.empty()) {
    out.vacuous = true;
    return out;
  }
  const auto nearest = [](const Point& x, const std::vector<Point>& cloud) {
    double best = kInf;
    for (const Point& p : cloud) {
      const double dx = x[0] - p[0];
      const double dy = x[1] - p[1];
      best = std::min(best, dx * dx + dy * dy);
    }
    return std::sqrt(best);
  };
  for (std::size_t k : nodes_u0) {
    out.defect_a = std::max(out.defect_a, nearest(g.coords(k), pos_eps));
  }
  for (std::size_t k : nodes_eps) {
    out.defect_b = std::max(out.defect_b, nearest(g.coords(k), pos_u0));
  }
  return out;
}

LimitReport run_continuation(const DirichletProblem& problem,
                             const EpsilonSchedule& schedule,
                             const ContinuationOptions& opts,
                             const ScalarField* init) {
  const auto* reaction = std::get_if<RhsReaction>(&problem.rhs);
  if (!reaction) {
    throw std::invalid_argument("run_continuation: problem needs a reaction");
  }
  schedule.validate(problem.grid);

  LimitReport rep(problem.grid);
  rep.C1 = opts.C1;
  rep.eps_values = schedule.values();
  rep.all_converged = true;

  std::vector<ScalarField> solutions;
  std::optional<ScalarField> warm;
  if (init) warm = *init;
  bool first = true;
  for (double eps : rep.eps_values) {
    ReactionTerm rt = reaction->rt;
    rt.eps = eps;
    DirichletProblem p(problem.grid, problem.boundary, RhsReaction{rt},
                       problem.op);
    auto [u, srep] = warm ? solve_singular(p, opts.solver, warm)
                          : solve_singular_cascadic(p, opts.solver);
    // the caller's init is a warm start for the first level only; the
    // sup_diff sequence must compare consecutive levels, not init vs level 0
    if (first && init) {
      warm.reset();
      first = false;
    }
    if (srep.aborted_nan || !srep.converged) rep.all_converged = false;
    if (warm) {
      double diff = 0.0;
      for (std::size_t k = 0; k < u.values.size(); ++k) {
        diff = std::max(diff, std::abs(u[k] - (*warm)[k]));
      }
      rep.sup_diffs.push_back(diff);
    }
    rep.geometry.push_back(measure_geometry(u, eps, problem.op, opts.geometry));
    // trim the per-iteration histories; the full traces stay with the solver
    srep.residual_history.clear();
    srep.tau_max_history.clear();
    rep.solve_reports.push_back(std::move(srep));
    warm = u;
    solutions.push_back(std::move(u));
    if (!rep.all_converged) break;
  }
  if (!warm) return rep;
  rep.u0 = std::move(*warm);

  const double sup_phi = problem.sup_boundary();
  rep.bounds_ok = true;
  const double bound_tol =
      opts.solver.tol > 0.0 ? opts.solver.tol : 1e-8 * (1.0 + sup_phi);
  for (double v : rep.u0.values) {
    if (v < -bound_tol || v > sup_phi + bound_tol) rep.bounds_ok = false;
  }

  const double margin = opts.geometry.margin > 0.0 ? opts.geometry.margin
                                                   : 4.0 * problem.grid.h();
  for (std::size_t m = 0; m < solutions.size(); ++m) {
    rep.defects.push_back(inclusion_defect(solutions[m], rep.u0,
                                           rep.eps_values[m], opts.C1,
                                           margin));
  }

  // limit consistency: D_inf u0 = g on the positivity set, away from the layer
  const double eps_tail = rep.eps_values.back();
  double worst = 0.0;
  for (std::size_t k = 0; k < problem.grid.node_count(); ++k) {
    if (problem.grid.is_boundary(k)) continue;
    if (rep.u0[k] <= 2.0 * eps_tail) continue;
    const double lap = problem.op.apply(rep.u0, k);
    const double gval = reaction->rt.g(problem.grid.coords(k));
    worst = std::max(worst, std::abs(lap - gval));
  }
  rep.positivity_residual = worst;
  return rep;
}

GeometryReport limit_geometry(const ScalarField& u0, const StencilOperator& op,
                              const GeometryOptions& opts) {
  return measure_geometry(u0, 0.0, op, opts);
}

double stability_ratio(const std::vector<double>& values) {
  double lo = kInf, hi = 0.0;
  for (double v : values) {
    if (v > 0.0) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > 0.0) || lo == kInf) return 0.0;
  return hi / lo;
}

}  // namespace inflap
