#include <variant>

#include "doctest.h"
#include "inflap/config.hpp"

using namespace inflap;

TEST_CASE("config parses dotted keys, comments and blank lines") {
  Config cfg = Config::parse_string(
      "# comment\n"
      "\n"
      "grid.n = 65   # trailing comment\n"
      "problem.lo.x = -2.5\n"
      "solver.max_iter = 1000\n");
  CHECK(cfg.has("grid.n"));
  CHECK(cfg.get_int("grid.n", 0) == 65);
  CHECK(cfg.get_double("problem.lo.x", 0.0) == doctest::Approx(-2.5));
  CHECK(cfg.get_size("solver.max_iter", 0) == 1000);
  CHECK(cfg.get_double("problem.hi.x", 1.0) == doctest::Approx(1.0));
}

TEST_CASE("config rejects malformed input") {
  CHECK_THROWS_AS(Config::parse_string("no.such.key = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("grid.n = 65\ngrid.n = 33\n"),
                  ConfigError);
  CHECK_THROWS_AS(Config::parse_string("grid.n 65\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("grid.n =\n"), ConfigError);
  Config bad = Config::parse_string("grid.n = sixty\n");
  CHECK_THROWS_AS(bad.get_int("grid.n", 0), ConfigError);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent/inflap.cfg"), ConfigError);
}

TEST_CASE("grid and boundary builders") {
  Config cfg = Config::parse_string(
      "grid.n = 9\n"
      "problem.lo.x = 1\nproblem.lo.y = 1\n"
      "problem.hi.x = 2\nproblem.hi.y = 2\n"
      "problem.boundary.kind = norm43\n"
      "problem.boundary.c0 = 1\n");
  Grid g = build_grid(cfg);
  CHECK(g.n_per_axis() == 9);
  CHECK(g.h() == doctest::Approx(0.125));
  ScalarField phi = build_boundary(cfg, g);
  // corner (2,2): (sqrt 8)^{4/3} = 8^{2/3} = 4
  CHECK(phi[g.index(8, 8)] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("solver options builder validates ranges") {
  Config cfg = Config::parse_string("solver.gamma = 0.3\nsolver.init = super\n");
  SolverOptions so = build_solver_options(cfg);
  CHECK(so.gamma == doctest::Approx(0.3));
  CHECK(so.init == InitKind::Super);
  CHECK_THROWS_AS(
      build_solver_options(Config::parse_string("solver.gamma = 0.6\n")),
      ConfigError);
  CHECK_THROWS_AS(
      build_solver_options(Config::parse_string("solver.init = sideways\n")),
      ConfigError);
}

TEST_CASE("reaction and rhs builders") {
  Config cfg = Config::parse_string(
      "grid.n = 9\n"
      "reaction.eps = 0.25\n"
      "reaction.beta = bump6\n"
      "problem.rhs.kind = reaction\n");
  Grid g = build_grid(cfg);
  ReactionTerm rt = build_reaction(cfg, g);
  CHECK(rt.eps == doctest::Approx(0.25));
  Rhs rhs = build_rhs(cfg, g);
  CHECK(std::holds_alternative<RhsReaction>(rhs));
  // the singular problem is the default
  Rhs rhs_default = build_rhs(Config::parse_string("grid.n = 9\n"), g);
  CHECK(std::holds_alternative<RhsReaction>(rhs_default));
  Rhs rhs0 =
      build_rhs(Config::parse_string("problem.rhs.kind = zero\n"), g);
  CHECK(std::holds_alternative<RhsZero>(rhs0));
}

TEST_CASE("schedule builder") {
  Config cfg = Config::parse_string(
      "schedule.eps0 = 0.5\nschedule.factor = 0.5\nschedule.count = 3\n");
  EpsilonSchedule sched = build_schedule(cfg);
  auto vals = sched.values();
  REQUIRE(vals.size() == 3);
  CHECK(vals[0] == doctest::Approx(0.5));
  CHECK(vals[2] == doctest::Approx(0.125));
}

TEST_CASE("oned builder spans the requested interval") {
  Config cfg = Config::parse_string(
      "oned.x_lo = -2\noned.x_hi = 2\noned.u_left = 0.4\n"
      "reaction.eps = 0.01\n");
  OneDProblem p = build_oned(cfg);
  CHECK(p.x_lo == doctest::Approx(-2.0));
  CHECK(p.u_left == doctest::Approx(0.4));
  CHECK(p.rt.eps == doctest::Approx(0.01));
}
