#include "inflap/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace inflap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// relative width of the tie-smoothing band for the extreme quotients
constexpr double kTieWidth = 0.005;

std::vector<StencilDirection> make_directions_2d(int w) {
  std::vector<StencilDirection> dirs;
  for (int dy = -w; dy <= w; ++dy) {
    for (int dx = -w; dx <= w; ++dx) {
      if (dx == 0 && dy == 0) continue;
      if (std::gcd(std::abs(dx), std::abs(dy)) != 1) continue;
      // keep one representative per +/- pair
      if (dx < 0 || (dx == 0 && dy < 0)) continue;
      dirs.push_back({dx, dy, std::hypot(double(dx), double(dy))});
    }
  }
  // fixed deterministic order: by (|v|, dx, dy)
  std::sort(dirs.begin(), dirs.end(), [](const auto& a, const auto& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    if (a.dx != b.dx) return a.dx < b.dx;
    return a.dy < b.dy;
  });
  return dirs;
}

}  // namespace

StencilOperator::StencilOperator(int width, double gradient_floor)
    : width_(width), gradient_floor_(gradient_floor) {
  if (width < 1 || width > 4) {
    throw std::invalid_argument("stencil width must lie in [1, 4]");
  }
  if (gradient_floor < 0.0) {
    throw std::invalid_argument("gradient_floor must be >= 0");
  }
  dirs_by_width_2d_.resize(width + 1);
  for (int w = 1; w <= width; ++w) {
    dirs_by_width_2d_[w] = make_directions_2d(w);
  }
}

const std::vector<StencilDirection>& StencilOperator::directions(int w) const {
  return dirs_by_width_2d_.at(w);
}

double StencilOperator::apply(const ScalarField& u, std::size_t node) const {
  return apply(u, node, nullptr);
}

double StencilOperator::apply(const ScalarField& u, std::size_t node,
                              double* slope_out) const {
  const Grid& g = u.grid;
  if (g.is_boundary(node)) {
    throw std::invalid_argument("StencilOperator::apply: node not interior");
  }
  const auto [i, j] = g.ij(node);
  const int n = g.n_per_axis();
  const double h = g.h();
  const double uc = u[node];

  int ring = std::min(i, n - 1 - i);
  if (g.dim() == 2) ring = std::min({ring, j, n - 1 - j});
  const int w = ring >= width_ ? width_ : 1;

  double best_q = 0.0;
  double max_slope = 0.0;
  double mag_slope = 0.0;

  if (g.dim() == 1) {
    const double up = u[node + 1];
    const double um = u[node - 1];
    best_q = (up + um - 2.0 * uc) / (h * h);
    mag_slope = std::max(std::abs(up - uc), std::abs(um - uc)) / h;
    max_slope = mag_slope;
  } else {
    // steepest up and down difference quotients over the stencil points; the
    // pair approximates u_nn along the gradient. A hard argmax makes the
    // operator jump when the extreme quotient switches between points at
    // different distances; the node equation can then skip its root and the
    // relaxation chatters forever. So the extremes are taken through a
    // log-sum-exp of width proportional to the quotient spread: continuous
    // in u, still nondecreasing in every neighbor value, and the smoothing
    // contaminates a quotient only within e^(-gap/width) of a tie.
    const auto& dirs = dirs_by_width_2d_[w];
    double s_arr[64];
    double d_arr[64];
    int m = 0;
    double g_max = -kInf, g_min = kInf;
    for (const StencilDirection& d : dirs) {
      const double len = d.norm * h;
      const double sp = (u[g.index(i + d.dx, j + d.dy)] - uc) / len;
      const double sm = (u[g.index(i - d.dx, j - d.dy)] - uc) / len;
      s_arr[m] = sp;
      d_arr[m] = len;
      ++m;
      s_arr[m] = sm;
      d_arr[m] = len;
      ++m;
      g_max = std::max(g_max, std::max(sp, sm));
      g_min = std::min(g_min, std::min(sp, sm));
    }
    const double spread = g_max - g_min;
    const double kap = kTieWidth * spread;
    double sp_s, sm_s, dp_s, dm_s;
    // kap underflows to zero for denormal spreads; the uniform branch
    // avoids the 0/0 that would follow
    if (!(kap > 0.0)) {
      double dbar = 0.0;
      for (int t = 0; t < m; ++t) dbar += d_arr[t];
      dbar /= m;
      sp_s = g_max;
      sm_s = g_min;
      dp_s = dm_s = dbar;
    } else {
      // quotients more than 34 widths away carry weight under 2e-15 and are
      // skipped; this keeps the operator continuous to roundoff while most
      // nodes pay for only the one or two extreme exponentials
      const double cut = 34.0 * kap;
      double zp = 0.0, zm = 0.0, dpa = 0.0, dma = 0.0;
      for (int t = 0; t < m; ++t) {
        if (g_max - s_arr[t] < cut) {
          const double wp = std::exp((s_arr[t] - g_max) / kap);
          zp += wp;
          dpa += wp * d_arr[t];
        }
        if (s_arr[t] - g_min < cut) {
          const double wm = std::exp((g_min - s_arr[t]) / kap);
          zm += wm;
          dma += wm * d_arr[t];
        }
      }
      sp_s = g_max + kap * std::log(zp);
      sm_s = g_min - kap * std::log(zm);
      dp_s = dpa / zp;
      dm_s = dma / zm;
    }
    best_q = 2.0 * (sp_s + sm_s) / (dp_s + dm_s);
    mag_slope = std::max(sp_s, -sm_s);
    max_slope = mag_slope;
  }

  // the slope factor is the dominant-side quotient magnitude. Whenever the
  // second difference is positive this is exactly the steepest uphill
  // quotient, so ordered data keeps ordered operator values; taking the
  // magnitude also removes the spurious flat equilibria that a purely
  // uphill slope would create for sign-changing or vanishing data
  const double s = std::max(gradient_floor_, max_slope);
  if (slope_out) *slope_out = s;
  return s * s * best_q;
}

ScalarField StencilOperator::apply_field(const ScalarField& u) const {
  ScalarField out(u.grid, 0.0);
  for (std::size_t k = 0; k < u.grid.node_count(); ++k) {
    if (u.grid.is_interior(k)) out[k] = apply(u, k);
  }
  return out;
}

std::vector<std::pair<double, double>> consistency_order(
    const StencilOperator& op, int dim, Point lo, Point hi,
    const std::function<double(Point)>& exact_u,
    const std::function<double(Point)>& exact_rhs,
    const std::vector<int>& n_list, Point win_lo, Point win_hi) {
  std::vector<std::pair<double, double>> out;
  for (int n : n_list) {
    Grid g = Grid::build(dim, lo, hi, n);
    ScalarField u(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      u[k] = exact_u(g.coords(k));
    }
    const double margin = op.width() * g.h();
    double max_err = 0.0;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      if (g.boundary_distance(k) < margin - 1e-12) continue;
      const Point x = g.coords(k);
      bool in_window = x[0] >= win_lo[0] - 1e-12 && x[0] <= win_hi[0] + 1e-12;
      if (dim == 2) {
        in_window = in_window && x[1] >= win_lo[1] - 1e-12 &&
                    x[1] <= win_hi[1] + 1e-12;
      }
      if (!in_window) continue;
      max_err = std::max(max_err, std::abs(op.apply(u, k) - exact_rhs(x)));
    }
    out.emplace_back(g.h(), max_err);
  }
  return out;
}

}  // namespace inflap
