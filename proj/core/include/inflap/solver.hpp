#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "inflap/grid.hpp"
#include "inflap/reaction.hpp"
#include "inflap/stencil.hpp"

namespace inflap {

struct RhsZero {};
struct RhsConst {
  double value = 0.0;
};
struct RhsField {
  ScalarField f;
};
struct RhsReaction {
  ReactionTerm rt;
};
using Rhs = std::variant<RhsZero, RhsConst, RhsField, RhsReaction>;

enum class InitKind { Super, Sub, BoundaryExtend, Zero };
InitKind parse_init_kind(const std::string& name);

// Delta_inf u = f(x, u) in Omega, u = phi on the boundary nodes.
struct DirichletProblem {
  Grid grid;
  ScalarField boundary;  // read on boundary nodes only
  Rhs rhs;
  StencilOperator op;

  DirichletProblem(const Grid& g, const ScalarField& phi, Rhs f,
                   const StencilOperator& stencil)
      : grid(g), boundary(phi), rhs(std::move(f)), op(stencil) {}

  double sup_boundary() const;
  double inf_boundary() const;
};

struct SolveReport {
  std::size_t iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  bool aborted_nan = false;
  bool sign_changing_rhs = false;
  bool bounds_ok = true;        // 0 <= u <= sup phi (within tol)
  double bracket_violation = 0.0;
  std::vector<double> residual_history;
  std::vector<double> tau_max_history;
};

struct SolverOptions {
  double tol = 0.0;  // <= 0 means 1e-8 * (1 + sup |phi|)
  std::size_t max_iter = 200000;
  double gamma = 0.4;
  // heavy ball weight on the previous increment; accelerates the smooth
  // error modes that plain relaxation damps at O(h^2) per sweep
  double momentum = 0.95;
  InitKind init = InitKind::Zero;  // iterate up the minimal branch
};

ScalarField make_init(const DirichletProblem& p, InitKind kind);

// Damped Jacobi pseudo-time relaxation; deterministic for any worker count.
std::pair<ScalarField, SolveReport> solve(const DirichletProblem& p,
                                          const SolverOptions& opts,
                                          const ScalarField& init);

std::pair<ScalarField, SolveReport> solve(const DirichletProblem& p,
                                          const SolverOptions& opts = {});

// As solve(), for the singular problem f(x,u) = zeta_eps(x,u); verifies the
// boundedness estimate 0 <= u <= sup phi in the report.
std::pair<ScalarField, SolveReport> solve_singular(
    const DirichletProblem& p, const SolverOptions& opts = {},
    const std::optional<ScalarField>& init = std::nullopt);

// Bilinear (2D) / linear (1D) interpolation onto a finer grid with the same
// corners.
ScalarField prolong(const ScalarField& coarse, const Grid& fine);

// Coarse-to-fine relaxation: halves n while (n - 1) stays even and n_coarse
// >= n_min, solves upward with prolongation warm starts. The report counts
// the fine-level iterations only.
std::pair<ScalarField, SolveReport> solve_singular_cascadic(
    const DirichletProblem& p, const SolverOptions& opts = {},
    int n_min = 65);

// Minimal-solution bracketing: lower solves RHS = sup zeta (envelope),
// upper solves RHS = 0, both with the boundary data of p.
struct PerronBracket {
  ScalarField lower;
  ScalarField upper;
  SolveReport lower_report;
  SolveReport upper_report;
};
PerronBracket perron_bracket(const DirichletProblem& p,
                             const SolverOptions& opts = {});

// max over nodes of max((lower - u)+, (u - upper)+)
double bracket_violation(const ScalarField& u, const ScalarField& lower,
                         const ScalarField& upper);

// Comparison principle defect: max_interior (u - v) - max_boundary (u - v).
double comparison_check(const ScalarField& u, const ScalarField& v);

}  // namespace inflap
