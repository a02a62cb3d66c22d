#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace inflap {

using Point = std::array<double, 2>;

// Uniform Cartesian grid on an axis-aligned interval (1D) or square-spaced
// rectangle (2D). Node ordering is row-major with the x index fastest.
class Grid {
 public:
  static Grid build(int dim, Point lo, Point hi, int n_per_axis);

  int dim() const { return dim_; }
  int n_per_axis() const { return n_; }
  double h() const { return h_; }
  Point lo() const { return lo_; }
  Point hi() const { return hi_; }

  std::size_t node_count() const;

  std::size_t index(int i, int j = 0) const;
  std::array<int, 2> ij(std::size_t node) const;
  Point coords(std::size_t node) const;

  bool is_boundary(std::size_t node) const;
  bool is_interior(std::size_t node) const { return !is_boundary(node); }

  // Euclidean distance from a node to the rectangle boundary.
  double boundary_distance(std::size_t node) const;

  bool same_layout(const Grid& other) const;

 private:
  int dim_ = 1;
  int n_ = 0;
  double h_ = 0.0;
  Point lo_{0.0, 0.0};
  Point hi_{0.0, 0.0};
};

struct ScalarField {
  Grid grid;
  std::vector<double> values;

  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), values(g.node_count(), fill) {}

  double& operator[](std::size_t node) { return values[node]; }
  double operator[](std::size_t node) const { return values[node]; }

  bool all_finite() const;
};

// Nodes at distance >= margin from the rectangle boundary (a discrete
// stand-in for a compactly contained subdomain).
struct Subdomain {
  Grid grid;
  double margin = 0.0;

  Subdomain(const Grid& g, double m) : grid(g), margin(m) {}
  bool contains(std::size_t node) const {
    return grid.boundary_distance(node) >= margin;
  }
  std::vector<std::size_t> members() const;
};

void save_snapshot(const ScalarField& field, const std::string& path);
ScalarField load_snapshot(const std::string& path);

// Decimal text with 17 significant digits; round-trips doubles exactly.
std::string format_g17(double v);

}  // namespace inflap
