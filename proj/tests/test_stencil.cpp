#include <cmath>

#include "doctest.h"
#include "inflap/stencil.hpp"

using namespace inflap;

namespace {

ScalarField sample(const Grid& g, double (*f)(Point)) {
  ScalarField u(g);
  for (std::size_t k = 0; k < g.node_count(); ++k) u[k] = f(g.coords(k));
  return u;
}

double affine(Point x) { return 0.3 + 1.7 * x[0] - 0.9 * x[1]; }
double paraboloid(Point x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); }

}  // namespace

TEST_CASE("direction sets are coprime half-pairs") {
  StencilOperator op(2);
  CHECK(op.directions(1).size() == 4);  // axes and diagonals
  CHECK(op.directions(2).size() == 8);  // adds the knight moves
  for (const auto& d : op.directions(2)) {
    CHECK(d.norm == doctest::Approx(std::sqrt(double(d.dx * d.dx + d.dy * d.dy))));
  }
  CHECK_THROWS(StencilOperator(0));
  CHECK_THROWS(StencilOperator(5));
}

TEST_CASE("affine functions are in the kernel") {
  Grid g = Grid::build(2, {-1.0, -1.0}, {1.0, 1.0}, 33);
  ScalarField u = sample(g, affine);
  StencilOperator op(2);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!g.is_interior(k)) continue;
    worst = std::max(worst, std::abs(op.apply(u, k)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("paraboloid consistency and refinement ratio") {
  StencilOperator op(2);
  auto rows = consistency_order(
      op, 2, {-1.0, -1.0}, {1.0, 1.0},
      [](Point x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); },
      [](Point x) { return x[0] * x[0] + x[1] * x[1]; }, {65, 129},
      {-0.75, -0.75}, {0.75, 0.75});
  REQUIRE(rows.size() == 2);
  const double err_coarse = rows[0].second;  // h = 1/32
  const double err_fine = rows[1].second;    // h = 1/64
  CHECK(err_fine <= 0.05);
  const double ratio = err_coarse / err_fine;
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 4.0);
}

TEST_CASE("boundary ring falls back to width one") {
  Grid g = Grid::build(2, {0.0, 0.0}, {1.0, 1.0}, 17);
  ScalarField u = sample(g, paraboloid);
  StencilOperator op(2);
  // node one cell in: only the width-1 cross fits
  const std::size_t k = g.index(1, 8);
  CHECK(std::isfinite(op.apply(u, k)));
  CHECK_THROWS(op.apply(u, g.index(0, 8)));  // boundary node
}

TEST_CASE("slope output reports the max one-sided slope") {
  Grid g = Grid::build(1, {0.0, 0.0}, {1.0, 0.0}, 11);
  ScalarField u(g);
  for (std::size_t k = 0; k < g.node_count(); ++k) u[k] = 2.0 * g.coords(k)[0];
  StencilOperator op(1);
  double s = 0.0;
  const double v = op.apply(u, g.index(5), &s);
  CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gradient floor guards flat data") {
  Grid g = Grid::build(2, {0.0, 0.0}, {1.0, 1.0}, 17);
  ScalarField u(g, 3.0);
  StencilOperator op(2, 1e-8);
  double s = 0.0;
  CHECK(op.apply(u, g.index(8, 8), &s) == doctest::Approx(0.0));
  CHECK(s == doctest::Approx(1e-8));
}
