#include "inflap/runner.hpp"

#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <iostream>
#include <variant>

#include "inflap/config.hpp"

namespace inflap {

namespace {

namespace fs = std::filesystem;

struct CsvWriter {
  std::ofstream out;

  CsvWriter(const fs::path& path, const std::string& header) {
    out.open(path);
    if (!out) {
      throw std::runtime_error("cannot open '" + path.string() +
                               "' for writing");
    }
    out << header << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (k > 0) out << ",";
      out << format_g17(values[k]);
    }
    out << "\n";
  }
};

struct RunContext {
  Config cfg;
  fs::path out;
  std::uint64_t seed = 1;
};

RunContext make_context(const CliOptions& opts) {
  RunContext ctx;
  ctx.cfg = opts.config_path.empty() ? Config::parse_string("")
                                     : Config::parse_file(opts.config_path);
  ctx.seed =
      opts.seed_set ? opts.seed : ctx.cfg.get_size("seed", std::size_t{1});
  const std::string dir = opts.out_dir.empty()
                              ? ctx.cfg.get_string("output.dir", "out")
                              : opts.out_dir;
  ctx.out = dir;
  fs::create_directories(ctx.out);
  return ctx;
}

void write_residuals(const fs::path& path, const SolveReport& rep) {
  CsvWriter csv(path, "iter,residual,tau_max");
  for (std::size_t k = 0; k < rep.residual_history.size(); ++k) {
    const double tau =
        k < rep.tau_max_history.size() ? rep.tau_max_history[k] : 0.0;
    csv.row({double(k), rep.residual_history[k], tau});
  }
}

int cmd_solve(const RunContext& ctx) {
  const DirichletProblem p = build_problem(ctx.cfg);
  const SolverOptions sopts = build_solver_options(ctx.cfg);
  const bool singular = std::holds_alternative<RhsReaction>(p.rhs);
  auto [u, rep] = singular ? solve_singular(p, sopts) : solve(p, sopts);

  save_snapshot(u, (ctx.out / "u.field").string());
  write_residuals(ctx.out / "residuals.csv", rep);
  double umin = u.values.empty() ? 0.0 : u.values[0];
  double umax = umin;
  for (double v : u.values) {
    umin = std::min(umin, v);
    umax = std::max(umax, v);
  }
  CsvWriter csv(ctx.out / "solve_summary.csv",
                "iterations,final_residual,converged,bounds_ok,sup_boundary,"
                "min_u,max_u");
  csv.row({double(rep.iterations), rep.final_residual,
           rep.converged ? 1.0 : 0.0, rep.bounds_ok ? 1.0 : 0.0,
           p.sup_boundary(), umin, umax});

  std::cout << "solve: " << rep.iterations
            << " iterations, residual " << format_g17(rep.final_residual)
            << (rep.converged ? "" : " (NOT converged)")
            << (rep.bounds_ok ? "" : " (bounds violated)") << "\n";
  const bool ok = rep.converged && !rep.aborted_nan &&
                  (!singular || rep.bounds_ok);
  return ok ? 0 : 1;
}

int cmd_continuation(const RunContext& ctx) {
  const DirichletProblem p = build_problem(ctx.cfg);
  if (!std::holds_alternative<RhsReaction>(p.rhs)) {
    throw ConfigError("continuation: problem.rhs.kind must be reaction");
  }
  const EpsilonSchedule schedule = build_schedule(ctx.cfg);
  const ContinuationOptions copts =
      build_continuation_options(ctx.cfg, p.grid, ctx.seed);
  const LimitReport rep = run_continuation(p, schedule, copts);

  CsvWriter csv(ctx.out / "continuation.csv",
                "eps,sup_diff,iterations,final_residual,lipschitz,growth_c_min,"
                "growth_C_max,nondeg_c,nondeg_upper,harnack_C,density_c0,"
                "porosity_delta,defect_a,defect_b");
  for (std::size_t m = 0; m < rep.eps_values.size(); ++m) {
    if (m >= rep.geometry.size()) break;
    const GeometryReport& gr = rep.geometry[m];
    const double diff =
        m == 0 ? std::numeric_limits<double>::quiet_NaN()
               : (m - 1 < rep.sup_diffs.size() ? rep.sup_diffs[m - 1] : 0.0);
    const double da =
        m < rep.defects.size() ? rep.defects[m].defect_a : 0.0;
    const double db =
        m < rep.defects.size() ? rep.defects[m].defect_b : 0.0;
    csv.row({rep.eps_values[m], diff, double(rep.solve_reports[m].iterations),
             rep.solve_reports[m].final_residual, gr.lipschitz.value,
             gr.growth_c_min.value, gr.growth_C_max.value, gr.nondeg_c.value,
             gr.nondeg_upper.value, gr.harnack_C.value, gr.density_c0.value,
             gr.porosity_delta.value, da, db});
  }

  std::vector<double> lip, harn;
  for (const auto& gr : rep.geometry) {
    lip.push_back(gr.lipschitz.value);
    if (!gr.harnack_C.vacuous()) harn.push_back(gr.harnack_C.value);
  }
  CsvWriter sum(ctx.out / "limit_summary.csv",
                "all_converged,bounds_ok,positivity_residual,C1,"
                "lipschitz_stability,harnack_stability");
  sum.row({rep.all_converged ? 1.0 : 0.0, rep.bounds_ok ? 1.0 : 0.0,
           rep.positivity_residual, rep.C1, stability_ratio(lip),
           stability_ratio(harn)});
  save_snapshot(rep.u0, (ctx.out / "u0.field").string());

  std::cout << "continuation: " << rep.eps_values.size() << " levels, "
            << (rep.all_converged ? "all converged" : "NOT converged")
            << ", positivity residual "
            << format_g17(rep.positivity_residual) << "\n";
  return (rep.all_converged && rep.bounds_ok) ? 0 : 1;
}

int cmd_geometry(const RunContext& ctx) {
  ScalarField u(Grid::build(1, {0.0, 0.0}, {1.0, 0.0}, 3));
  double eps = ctx.cfg.get_double("reaction.eps", 0.1);
  if (ctx.cfg.has("input.field")) {
    u = load_snapshot(ctx.cfg.get_string("input.field", ""));
  } else {
    const DirichletProblem p = build_problem(ctx.cfg);
    auto [sol, rep] =
        std::holds_alternative<RhsReaction>(p.rhs)
            ? solve_singular(p, build_solver_options(ctx.cfg))
            : solve(p, build_solver_options(ctx.cfg));
    if (!rep.converged) {
      std::cerr << "geometry: solve did not converge\n";
      return 1;
    }
    u = std::move(sol);
  }
  const StencilOperator op = build_operator(ctx.cfg);
  const GeometryOptions gopts =
      build_geometry_options(ctx.cfg, u.grid, ctx.seed);
  const GeometryReport gr = measure_geometry(u, eps, op, gopts);

  CsvWriter csv(ctx.out / "geometry.csv",
                "eps,lipschitz,growth_c_min,growth_C_max,nondeg_c,nondeg_upper,"
                "harnack_C,density_c0,porosity_delta,interface_node_fraction,"
                "skipped_balls");
  csv.row({gr.eps, gr.lipschitz.value, gr.growth_c_min.value,
           gr.growth_C_max.value, gr.nondeg_c.value, gr.nondeg_upper.value,
           gr.harnack_C.value, gr.density_c0.value, gr.porosity_delta.value,
           gr.interface_node_fraction, double(gr.skipped_balls)});
  CsvWriter mk(ctx.out / "minkowski.csv", "delta,content");
  for (const auto& [dlt, content] : gr.minkowski) mk.row({dlt, content});

  std::cout << "geometry: lipschitz " << format_g17(gr.lipschitz.value)
            << ", density " << format_g17(gr.density_c0.value) << ", porosity "
            << format_g17(gr.porosity_delta.value) << "\n";
  return 0;
}

int cmd_barrier_check(const RunContext& ctx) {
  const BarrierParams bp = build_barrier(ctx.cfg);
  const Grid dummy = Grid::build(1, {0.0, 0.0}, {1.0, 0.0}, 3);
  const ReactionTerm rt = build_reaction(ctx.cfg, dummy);

  std::vector<double> radii;
  const double r_max = 2.0 * (bp.L + bp.L0);
  for (int k = 1; k <= 400; ++k) radii.push_back(r_max * k / 400.0);
  const SupersolutionReport rep = verify_supersolution(bp, rt, radii);
  const GrowthReport growth = growth_check(bp);

  CsvWriter csv(ctx.out / "barrier.csv", "r,theta,closed_form,zeta,ok");
  for (double r : radii) {
    const double theta = eval_barrier(bp, r);
    const double lap = closed_form_inf_laplacian(bp, r);
    const double z = rt.eval_scaled({r, 0.0}, theta);
    csv.row({r, theta, lap, z, lap <= z + 1e-12 ? 1.0 : 0.0});
  }
  CsvWriter sum(ctx.out / "barrier_summary.csv",
                "pass,small_A0_ok,inf_zeta_band,worst_gap,worst_r,"
                "kappa0_effective,monotone");
  sum.row({rep.pass ? 1.0 : 0.0, rep.small_A0_ok ? 1.0 : 0.0,
           rep.inf_zeta_band, rep.worst_gap, rep.worst_r,
           growth.kappa0_effective, growth.monotone ? 1.0 : 0.0});

  std::cout << "barrier-check: " << (rep.pass ? "supersolution ok" : "FAILED")
            << ", growth slope " << format_g17(growth.kappa0_effective)
            << "\n";
  return (rep.pass && growth.monotone) ? 0 : 1;
}

int cmd_oned(const RunContext& ctx) {
  const OneDProblem p = build_oned(ctx.cfg);
  const Trajectory tr = integrate(p);
  const double drift = first_integral_drift(p, tr);
  const double threshold =
      ctx.cfg.get_double("oned.threshold", p.rt.eps);
  const auto crossings = fb_slope(tr, threshold);
  const double predicted = predicted_slope(p.rt);

  {
    CsvWriter csv(ctx.out / "trajectory.csv", "x,u,du,first_integral");
    for (const auto& q : tr.points) {
      const double inv =
          q.du * q.du * q.du * q.du / 4.0 - p.rt.primitive({0.0, 0.0}, q.u);
      csv.row({q.x, q.u, q.du, inv});
    }
  }
  {
    CsvWriter csv(ctx.out / "crossings.csv", "x,slope,predicted");
    for (const auto& c : crossings) csv.row({c.x, c.slope, predicted});
  }
  CsvWriter sum(ctx.out / "oned_summary.csv",
                "shot_slope,boundary_mismatch,contact,contact_lo,contact_hi,"
                "first_integral_drift,predicted_slope");
  sum.row({tr.shot_slope, tr.boundary_mismatch, tr.contact ? 1.0 : 0.0,
           tr.contact_lo, tr.contact_hi, drift, predicted});

  std::cout << "oned: " << (tr.contact ? "contact" : "bounce") << ", mismatch "
            << format_g17(tr.boundary_mismatch) << ", "
            << crossings.size() << " crossings, predicted slope "
            << format_g17(predicted) << "\n";
  return tr.boundary_mismatch <= 1e-6 ? 0 : 1;
}

int cmd_selftest(const RunContext& ctx) {
  int failures = 0;
  const auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // envelope and non-degeneracy of the default catalogue
  {
    ReactionTerm rt;
    rt.eps = 0.1;
    rt.beta = BumpProfile::parse("bump6");
    rt.envelope_B = rt.beta.max_value();
    rt.envelope_C = 1e-12;
    const std::vector<Point> xs = {{0.0, 0.0}, {0.3, -0.2}};
    check("reaction.envelope", verify_envelope(rt, xs).pass);
    check("reaction.nondegeneracy", verify_nondegeneracy(rt, xs).positive);
    check("reaction.beta_integral",
          std::abs(beta_integral(rt) - 1.0) < 1e-9);
  }
  // operator vanishes on affine data
  {
    const Grid g = Grid::build(2, {0.0, 0.0}, {1.0, 1.0}, 17);
    ScalarField u(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      const Point x = g.coords(k);
      u[k] = 1.0 + 2.0 * x[0] - 3.0 * x[1];
    }
    const StencilOperator op(2);
    double worst = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      if (g.is_boundary(k)) continue;
      worst = std::max(worst, std::abs(op.apply(u, k)));
    }
    check("operator.affine_kernel", worst < 1e-12);
  }
  // solver reproduces affine data exactly (it is a discrete solution)
  {
    const Grid g = Grid::build(2, {0.0, 0.0}, {1.0, 1.0}, 17);
    ScalarField phi(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      const Point x = g.coords(k);
      phi[k] = 0.25 + 0.75 * x[0] - 0.5 * x[1];
    }
    DirichletProblem p(g, phi, RhsZero{}, StencilOperator(2));
    auto [u, rep] = solve(p, {});
    double worst = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      worst = std::max(worst, std::abs(u[k] - phi[k]));
    }
    check("solver.affine_data", rep.converged && worst < 1e-6);
  }
  // barrier growth and supersolution on defaults
  {
    const BarrierParams bp = BarrierParams::make(0.25, 0.75, 0.01, 2.0, 10.0);
    ReactionTerm rt;
    rt.beta = BumpProfile::parse("bump6");
    rt.band_a = 0.25;
    rt.band_b = 0.75;
    std::vector<double> radii;
    for (int k = 1; k <= 100; ++k) radii.push_back(0.4 * k);
    check("barrier.supersolution", verify_supersolution(bp, rt, radii).pass);
    check("barrier.monotone", growth_check(bp).monotone);
  }
  // snapshot round trip
  {
    const Grid g = Grid::build(1, {-1.0, 0.0}, {1.0, 0.0}, 9);
    ScalarField u(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      u[k] = std::sin(double(k)) / 3.0;
    }
    const fs::path path = ctx.out / "selftest_roundtrip.field";
    save_snapshot(u, path.string());
    const ScalarField v = load_snapshot(path.string());
    check("snapshot.roundtrip", v.values == u.values);
  }

  std::cout << (failures == 0 ? "selftest: all checks passed"
                              : "selftest: FAILURES") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int run_command(const CliOptions& opts) {
  try {
    const RunContext ctx = make_context(opts);
    if (opts.subcommand == "solve") return cmd_solve(ctx);
    if (opts.subcommand == "continuation") return cmd_continuation(ctx);
    if (opts.subcommand == "geometry") return cmd_geometry(ctx);
    if (opts.subcommand == "barrier-check") return cmd_barrier_check(ctx);
    if (opts.subcommand == "oned") return cmd_oned(ctx);
    if (opts.subcommand == "selftest") return cmd_selftest(ctx);
    std::cerr << "unknown subcommand '" << opts.subcommand << "'\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace inflap
