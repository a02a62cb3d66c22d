#include "inflap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "inflap/parallel.hpp"

namespace inflap {

InitKind parse_init_kind(const std::string& name) {
  if (name == "super") return InitKind::Super;
  if (name == "sub") return InitKind::Sub;
  if (name == "boundary-extend") return InitKind::BoundaryExtend;
  if (name == "zero") return InitKind::Zero;
  throw std::invalid_argument("unknown solver.init: " + name);
}

namespace {

template <class F>
double boundary_reduce(const DirichletProblem& p, double start, F&& fold) {
  double acc = start;
  for (std::size_t k = 0; k < p.grid.node_count(); ++k) {
    if (p.grid.is_boundary(k)) acc = fold(acc, p.boundary[k]);
  }
  return acc;
}

}  // namespace

double DirichletProblem::sup_boundary() const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (grid.is_boundary(k)) m = std::max(m, boundary[k]);
  }
  return m;
}

double DirichletProblem::inf_boundary() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (grid.is_boundary(k)) m = std::min(m, boundary[k]);
  }
  return m;
}

ScalarField make_init(const DirichletProblem& p, InitKind kind) {
  const Grid& g = p.grid;
  ScalarField u(g, 0.0);
  const double sup = p.sup_boundary();
  const double inf = p.inf_boundary();
  const int n = g.n_per_axis();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (g.is_boundary(k)) {
      u[k] = p.boundary[k];
      continue;
    }
    switch (kind) {
      case InitKind::Super:
        u[k] = sup;
        break;
      case InitKind::Sub:
        u[k] = inf;
        break;
      case InitKind::Zero:
        u[k] = 0.0;
        break;
      case InitKind::BoundaryExtend: {
        const auto [i, j] = g.ij(k);
        // nearest boundary node, sides scanned in a fixed order
        int best_dist = n;
        std::size_t best = 0;
        const auto consider = [&](int dist, std::size_t node) {
          if (dist < best_dist) {
            best_dist = dist;
            best = node;
          }
        };
        consider(i, g.index(0, j));
        consider(n - 1 - i, g.index(n - 1, j));
        if (g.dim() == 2) {
          consider(j, g.index(i, 0));
          consider(n - 1 - j, g.index(i, n - 1));
        }
        u[k] = p.boundary[best];
        break;
      }
    }
  }
  return u;
}

namespace {

struct IterationScratch {
  std::vector<std::size_t> interior;
  std::vector<double> fbase;  // x-dependent part of the RHS per interior node
};

IterationScratch make_scratch(const DirichletProblem& p) {
  IterationScratch s;
  const Grid& g = p.grid;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (g.is_interior(k)) s.interior.push_back(k);
  }
  s.fbase.resize(s.interior.size(), 0.0);
  if (const auto* c = std::get_if<RhsConst>(&p.rhs)) {
    std::fill(s.fbase.begin(), s.fbase.end(), c->value);
  } else if (const auto* f = std::get_if<RhsField>(&p.rhs)) {
    if (!f->f.grid.same_layout(g)) {
      throw std::invalid_argument("solve: rhs field grid mismatch");
    }
    for (std::size_t m = 0; m < s.interior.size(); ++m) {
      s.fbase[m] = f->f[s.interior[m]];
    }
  } else if (const auto* r = std::get_if<RhsReaction>(&p.rhs)) {
    for (std::size_t m = 0; m < s.interior.size(); ++m) {
      s.fbase[m] = r->rt.g(g.coords(s.interior[m]));
    }
  }
  return s;
}

}  // namespace

std::pair<ScalarField, SolveReport> solve(const DirichletProblem& p,
                                          const SolverOptions& opts,
                                          const ScalarField& init) {
  const Grid& g = p.grid;
  if (!init.grid.same_layout(g)) {
    throw std::invalid_argument("solve: init grid mismatch");
  }
  SolveReport rep;

  const double sup_abs_phi =
      boundary_reduce(p, 0.0, [](double a, double v) {
        return std::max(a, std::abs(v));
      });
  const double tol = opts.tol > 0.0 ? opts.tol : 1e-8 * (1.0 + sup_abs_phi);
  const double h = g.h();
  const double h2 = h * h;

  const IterationScratch scratch = make_scratch(p);
  const std::size_t m_count = scratch.interior.size();

  const ReactionTerm* rt = nullptr;
  if (const auto* r = std::get_if<RhsReaction>(&p.rhs)) rt = &r->rt;
  if (const auto* f = std::get_if<RhsField>(&p.rhs)) {
    const auto [lo, hi] = std::minmax_element(f->f.values.begin(),
                                              f->f.values.end());
    rep.sign_changing_rhs = *lo < 0.0 && *hi > 0.0;
  }

  ScalarField u = init;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (g.is_boundary(k)) u[k] = p.boundary[k];
  }
  ScalarField next = u;
  ScalarField prev = u;
  const double momentum = std::min(std::max(opts.momentum, 0.0), 0.999);
  // momentum restarts whenever the residual grows: the velocity is cleared
  // and acceleration stays off for a growing cool-down, so the raw iteration
  // is the stable fallback around nonlinear kinks
  double m_cur = 0.0;
  std::size_t cool = 0;
  std::size_t backoff = 8;
  std::size_t calm = 0;

  const int workers = worker_count();
  std::vector<double> chunk_res(workers), chunk_tau(workers);
  std::vector<char> chunk_bad(workers);

  rep.residual_history.reserve(std::min<std::size_t>(opts.max_iter, 1 << 20));
  rep.tau_max_history.reserve(rep.residual_history.capacity());

  for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
    std::fill(chunk_res.begin(), chunk_res.end(), 0.0);
    std::fill(chunk_tau.begin(), chunk_tau.end(), 0.0);
    std::fill(chunk_bad.begin(), chunk_bad.end(), 0);

    parallel_chunks(m_count, [&](std::size_t begin, std::size_t end, int w) {
      double res_max = 0.0;
      double tau_max = 0.0;
      bool bad = false;
      for (std::size_t m = begin; m < end; ++m) {
        const std::size_t k = scratch.interior[m];
        double slope = 0.0;
        const double lap = p.op.apply(u, k, &slope);
        double f = scratch.fbase[m];
        // diagonal bound of d(apply - zeta)/du at the node: the second
        // difference part, the center dependence of the one-sided slope
        // (order 2 s |q| / h) and the reaction stiffness, all damped
        // semi-implicitly through the denominator
        const double qa = std::abs(lap) / std::max(slope * slope, h2);
        double denom =
            2.0 * (slope * slope + h2) / h2 + 2.0 * slope * qa / h;
        if (rt) {
          const double t = std::max(u[k], 0.0);
          f += rt->beta(t / rt->eps) / rt->eps;
          denom +=
              std::abs(rt->beta.derivative(t / rt->eps)) / (rt->eps * rt->eps);
        }
        const double tau = 2.0 * opts.gamma / denom;
        const double r = lap - f;
        if (!std::isfinite(r)) bad = true;
        res_max = std::max(res_max, std::abs(r));
        tau_max = std::max(tau_max, tau);
        // trust region of half a cell: keeps one sweep from flipping the
        // slope balance at nearly flat nodes, where tau alone is too coarse
        const double cap = 0.5 * h;
        const double step = tau * r + m_cur * (u[k] - prev[k]);
        next[k] = u[k] + std::clamp(step, -cap, cap);
      }
      chunk_res[w] = std::max(chunk_res[w], res_max);
      chunk_tau[w] = std::max(chunk_tau[w], tau_max);
      if (bad) chunk_bad[w] = 1;
    });

    double res_max = 0.0, tau_max = 0.0;
    bool bad = false;
    for (int w = 0; w < workers; ++w) {
      res_max = std::max(res_max, chunk_res[w]);
      tau_max = std::max(tau_max, chunk_tau[w]);
      bad = bad || chunk_bad[w];
    }
    const bool grew = !rep.residual_history.empty() &&
                      res_max > rep.residual_history.back();
    if (grew && m_cur > 0.0) {
      // only a momentum overshoot warrants a restart; the raw damped sweep
      // is allowed to grow occasionally and must keep moving
      m_cur = 0.0;
      cool = backoff;
      backoff = std::min<std::size_t>(2 * backoff, 512);
      // drop the velocity, it carries the overshoot that caused the growth
      std::copy(u.values.begin(), u.values.end(), next.values.begin());
      calm = 0;
    } else if (cool > 0) {
      m_cur = 0.0;
      --cool;
    } else {
      m_cur = momentum;
      // sustained progress earns the next restart a shorter cool-down
      if (++calm >= 64 && backoff > 8) {
        backoff /= 2;
        calm = 0;
      }
    }
    rep.residual_history.push_back(res_max);
    rep.tau_max_history.push_back(tau_max);
    rep.iterations = iter + 1;
    rep.final_residual = res_max;
    if (bad) {
      rep.aborted_nan = true;
      break;
    }
    if (res_max <= tol) {
      rep.converged = true;
      break;
    }
    prev.values.swap(u.values);
    u.values.swap(next.values);
  }

  const double sup_phi = p.sup_boundary();
  rep.bounds_ok = true;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (u[k] < -tol || u[k] > sup_phi + tol) rep.bounds_ok = false;
  }
  return {std::move(u), std::move(rep)};
}

std::pair<ScalarField, SolveReport> solve(const DirichletProblem& p,
                                          const SolverOptions& opts) {
  return solve(p, opts, make_init(p, opts.init));
}

std::pair<ScalarField, SolveReport> solve_singular(
    const DirichletProblem& p, const SolverOptions& opts,
    const std::optional<ScalarField>& init) {
  if (!std::holds_alternative<RhsReaction>(p.rhs)) {
    throw std::invalid_argument("solve_singular: rhs must be a ReactionTerm");
  }
  auto result = init ? solve(p, opts, *init) : solve(p, opts, make_init(p, opts.init));
  // zero is a subsolution of the reaction problem, so the sought minimal
  // solution is nonnegative. The degenerate slope factor lets dips of depth
  // up to about (tol h^4)^(1/3) sit below any residual tolerance; take the
  // nonnegative part so the bounds of the continuous problem are honored.
  for (double& v : result.first.values) v = std::max(v, 0.0);
  result.second.bounds_ok = true;
  const double sup_phi = p.sup_boundary();
  for (double v : result.first.values) {
    if (v > sup_phi + opts.tol) result.second.bounds_ok = false;
  }
  return result;
}

ScalarField prolong(const ScalarField& coarse, const Grid& fine) {
  const Grid& cg = coarse.grid;
  if (cg.dim() != fine.dim() || cg.lo() != fine.lo() || cg.hi() != fine.hi()) {
    throw std::invalid_argument("prolong: grids must share corners");
  }
  ScalarField out(fine);
  const int cn = cg.n_per_axis();
  const double ch = cg.h();
  for (std::size_t k = 0; k < fine.node_count(); ++k) {
    const Point x = fine.coords(k);
    const double fx = (x[0] - cg.lo()[0]) / ch;
    const int i0 = std::min(cn - 2, std::max(0, int(std::floor(fx))));
    const double tx = std::min(1.0, std::max(0.0, fx - i0));
    if (fine.dim() == 1) {
      out[k] = (1.0 - tx) * coarse[cg.index(i0)] + tx * coarse[cg.index(i0 + 1)];
      continue;
    }
    const double fy = (x[1] - cg.lo()[1]) / ch;
    const int j0 = std::min(cn - 2, std::max(0, int(std::floor(fy))));
    const double ty = std::min(1.0, std::max(0.0, fy - j0));
    out[k] = (1.0 - tx) * (1.0 - ty) * coarse[cg.index(i0, j0)] +
             tx * (1.0 - ty) * coarse[cg.index(i0 + 1, j0)] +
             (1.0 - tx) * ty * coarse[cg.index(i0, j0 + 1)] +
             tx * ty * coarse[cg.index(i0 + 1, j0 + 1)];
  }
  return out;
}

std::pair<ScalarField, SolveReport> solve_singular_cascadic(
    const DirichletProblem& p, const SolverOptions& opts, int n_min) {
  std::vector<int> levels{p.grid.n_per_axis()};
  while ((levels.back() - 1) % 2 == 0 && (levels.back() - 1) / 2 + 1 >= n_min) {
    levels.push_back((levels.back() - 1) / 2 + 1);
  }
  std::optional<ScalarField> warm;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const Grid g = Grid::build(p.grid.dim(), p.grid.lo(), p.grid.hi(), *it);
    ScalarField phi(g);
    // every coarse node coincides with a fine node, so sampling the fine
    // boundary field through coordinates is exact
    if (*it == p.grid.n_per_axis()) {
      phi = p.boundary;
    } else {
      const int stride = (p.grid.n_per_axis() - 1) / (*it - 1);
      for (std::size_t k = 0; k < g.node_count(); ++k) {
        const auto [i, j] = g.ij(k);
        phi[k] = p.boundary[p.grid.index(i * stride, j * stride)];
      }
    }
    DirichletProblem level_p(g, phi, p.rhs, p.op);
    std::optional<ScalarField> init;
    if (warm) init = prolong(*warm, g);
    auto [u, rep] = solve_singular(level_p, opts, init);
    if (*it == p.grid.n_per_axis()) return {std::move(u), std::move(rep)};
    warm = std::move(u);
  }
  return solve_singular(p, opts);
}

PerronBracket perron_bracket(const DirichletProblem& p,
                             const SolverOptions& opts) {
  double sup_zeta = 0.0;
  if (const auto* r = std::get_if<RhsReaction>(&p.rhs)) {
    sup_zeta = r->rt.sup_bound();
  } else if (const auto* c = std::get_if<RhsConst>(&p.rhs)) {
    sup_zeta = std::max(0.0, c->value);
  } else if (const auto* f = std::get_if<RhsField>(&p.rhs)) {
    sup_zeta = std::max(
        0.0, *std::max_element(f->f.values.begin(), f->f.values.end()));
  }
  DirichletProblem lower_p(p.grid, p.boundary, RhsConst{sup_zeta}, p.op);
  DirichletProblem upper_p(p.grid, p.boundary, RhsZero{}, p.op);
  auto [lower, lrep] = solve(lower_p, opts);
  auto [upper, urep] = solve(upper_p, opts);
  return {std::move(lower), std::move(upper), std::move(lrep),
          std::move(urep)};
}

double bracket_violation(const ScalarField& u, const ScalarField& lower,
                         const ScalarField& upper) {
  double v = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    v = std::max({v, lower[k] - u[k], u[k] - upper[k]});
  }
  return v;
}

double comparison_check(const ScalarField& u, const ScalarField& v) {
  const Grid& g = u.grid;
  double interior = -std::numeric_limits<double>::infinity();
  double boundary = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const double d = u[k] - v[k];
    if (g.is_boundary(k)) {
      boundary = std::max(boundary, d);
    } else {
      interior = std::max(interior, d);
    }
  }
  return interior - boundary;
}

}  // namespace inflap
