#include "inflap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace inflap {

Grid Grid::build(int dim, Point lo, Point hi, int n_per_axis) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("Grid: dim must be 1 or 2");
  }
  if (n_per_axis < 3) {
    throw std::invalid_argument("Grid: need at least 3 nodes per axis");
  }
  for (int k = 0; k < dim; ++k) {
    if (!(lo[k] < hi[k])) {
      throw std::invalid_argument("Grid: corners must be ordered");
    }
  }
  const double hx = (hi[0] - lo[0]) / (n_per_axis - 1);
  if (dim == 2) {
    const double hy = (hi[1] - lo[1]) / (n_per_axis - 1);
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
      throw std::invalid_argument("Grid: spacing must be equal on both axes");
    }
  }
  Grid g;
  g.dim_ = dim;
  g.n_ = n_per_axis;
  g.h_ = hx;
  g.lo_ = lo;
  g.hi_ = hi;
  if (dim == 1) {
    g.lo_[1] = g.hi_[1] = 0.0;
  }
  return g;
}

std::size_t Grid::node_count() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_)
                   : static_cast<std::size_t>(n_) * n_;
}

std::size_t Grid::index(int i, int j) const {
  return static_cast<std::size_t>(j) * n_ + i;
}

std::array<int, 2> Grid::ij(std::size_t node) const {
  const int i = static_cast<int>(node % n_);
  const int j = static_cast<int>(node / n_);
  return {i, j};
}

Point Grid::coords(std::size_t node) const {
  const auto [i, j] = ij(node);
  return {lo_[0] + i * h_, dim_ == 2 ? lo_[1] + j * h_ : 0.0};
}

bool Grid::is_boundary(std::size_t node) const {
  const auto [i, j] = ij(node);
  if (i == 0 || i == n_ - 1) return true;
  if (dim_ == 2 && (j == 0 || j == n_ - 1)) return true;
  return false;
}

double Grid::boundary_distance(std::size_t node) const {
  const Point x = coords(node);
  double d = std::min(x[0] - lo_[0], hi_[0] - x[0]);
  if (dim_ == 2) {
    d = std::min({d, x[1] - lo_[1], hi_[1] - x[1]});
  }
  return d;
}

bool Grid::same_layout(const Grid& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && h_ == other.h_ &&
         lo_ == other.lo_ && hi_ == other.hi_;
}

bool ScalarField::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

std::vector<std::size_t> Subdomain::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_snapshot(const ScalarField& field, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_snapshot: cannot open " + path);
  const Grid& g = field.grid;
  os << "INFLAP-FIELD v1\n";
  os << g.dim() << ' ' << g.n_per_axis() << ' ' << format_g17(g.h());
  for (int k = 0; k < g.dim(); ++k) os << ' ' << format_g17(g.lo()[k]);
  os << '\n';
  for (double v : field.values) os << format_g17(v) << '\n';
  if (!os) throw std::runtime_error("save_snapshot: write failed: " + path);
}

ScalarField load_snapshot(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_snapshot: cannot open " + path);
  std::string header;
  std::getline(is, header);
  if (header != "INFLAP-FIELD v1") {
    throw std::runtime_error("load_snapshot: bad header in " + path);
  }
  std::string meta;
  std::getline(is, meta);
  std::istringstream ms(meta);
  int dim = 0, n = 0;
  double h = 0.0;
  Point lo{0.0, 0.0};
  ms >> dim >> n >> h;
  for (int k = 0; k < dim && ms; ++k) ms >> lo[k];
  if (!ms || (dim != 1 && dim != 2) || n < 3 || !(h > 0.0)) {
    throw std::runtime_error("load_snapshot: malformed metadata in " + path);
  }
  Point hi{lo[0] + (n - 1) * h, lo[1] + (n - 1) * h};
  Grid g = Grid::build(dim, lo, hi, n);
  ScalarField field(g);
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (!(is >> field.values[k])) {
      throw std::runtime_error("load_snapshot: node count mismatch in " + path);
    }
  }
  double extra;
  if (is >> extra) {
    throw std::runtime_error("load_snapshot: node count mismatch in " + path);
  }
  return field;
}

}  // namespace inflap
