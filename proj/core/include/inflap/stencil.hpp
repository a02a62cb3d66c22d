#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "inflap/grid.hpp"

namespace inflap {

struct StencilDirection {
  int dx = 0;
  int dy = 0;
  double norm = 0.0;  // |v| in lattice units
};

// Wide-stencil discretization of the non-normalized infinity Laplacian
//   D_inf u = s^2 * q
// with q assembled from the steepest difference quotients over the stencil
// points y (both ends of every coprime lattice direction):
//   s+ = max_y (u(y) - u(x)) / |y - x|,  attained at distance d+
//   s- = min_y (u(y) - u(x)) / |y - x|,  attained at distance d-
//   q  = 2 (s+ + s-) / (d+ + d-)
//   s  = max(gradient_floor, s+, 0)
// q is nondecreasing in every neighbor value, so the scheme satisfies the
// discrete comparison principle on right-hand sides of one sign; it is also
// continuous in u, which keeps the relaxation free of selection chatter.
// Nodes closer than `width` cells to the boundary fall back to width 1.
class StencilOperator {
 public:
  StencilOperator(int width = 2, double gradient_floor = 1e-8);

  int width() const { return width_; }
  double gradient_floor() const { return gradient_floor_; }

  // Half of the symmetric direction set (one vector per +/- pair),
  // restricted to max-norm <= w, components coprime.
  const std::vector<StencilDirection>& directions(int w) const;

  double apply(const ScalarField& u, std::size_t node) const;
  double apply(const ScalarField& u, std::size_t node, double* slope_out) const;

  // Pointwise apply on interior nodes, zero on boundary nodes.
  ScalarField apply_field(const ScalarField& u) const;

 private:
  int width_;
  double gradient_floor_;
  std::vector<std::vector<StencilDirection>> dirs_by_width_2d_;
};

// Validation harness: samples exact_u on grids with spacings h_list over
// [lo,hi]^dim and reports the max |discrete - exact_rhs| per h, measured on
// the window where the full-width stencil applies intersected with
// [win_lo, win_hi] (component-wise).
std::vector<std::pair<double, double>> consistency_order(
    const StencilOperator& op, int dim, Point lo, Point hi,
    const std::function<double(Point)>& exact_u,
    const std::function<double(Point)>& exact_rhs,
    const std::vector<int>& n_list, Point win_lo, Point win_hi);

}  // namespace inflap
