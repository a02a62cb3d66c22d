#include "inflap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "inflap/parallel.hpp"

namespace inflap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t below(std::size_t n) { return next() % n; }
};

// Deterministic subsample without replacement (partial Fisher-Yates).
template <class T>
std::vector<T> subsample(std::vector<T> items, std::size_t max_count,
                         std::uint64_t seed) {
  if (items.size() <= max_count) return items;
  SplitMix64 rng(seed);
  for (std::size_t k = 0; k < max_count; ++k) {
    const std::size_t j = k + rng.below(items.size() - k);
    std::swap(items[k], items[j]);
  }
  items.resize(max_count);
  return items;
}

double dist2(const Point& p, const Point& q) {
  const double dx = p[0] - q[0];
  const double dy = p[1] - q[1];
  return dx * dx + dy * dy;
}

// Per-node Euclidean distance to a point cloud, brute force.
std::vector<double> distance_to_cloud(const Grid& g,
                                      const std::vector<Point>& cloud) {
  std::vector<double> out(g.node_count(), kInf);
  if (cloud.empty()) return out;
  parallel_chunks(g.node_count(), [&](std::size_t lo, std::size_t hi, int) {
    for (std::size_t k = lo; k < hi; ++k) {
      const Point x = g.coords(k);
      double best = kInf;
      for (const Point& p : cloud) best = std::min(best, dist2(x, p));
      out[k] = std::sqrt(best);
    }
  });
  return out;
}

// Nodes of B_rho(x0); empty when the ball pokes out of the grid box.
std::vector<std::size_t> ball_nodes(const Grid& g, const Point& x0,
                                    double rho, bool* outside = nullptr) {
  std::vector<std::size_t> out;
  const double h = g.h();
  const int n = g.n_per_axis();
  bool exits = x0[0] - rho < g.lo()[0] - 1e-12 ||
               x0[0] + rho > g.hi()[0] + 1e-12;
  if (g.dim() == 2) {
    exits = exits || x0[1] - rho < g.lo()[1] - 1e-12 ||
            x0[1] + rho > g.hi()[1] + 1e-12;
  }
  if (outside) *outside = exits;
  const int i_lo = std::max(0, int(std::ceil((x0[0] - rho - g.lo()[0]) / h)));
  const int i_hi =
      std::min(n - 1, int(std::floor((x0[0] + rho - g.lo()[0]) / h)));
  if (g.dim() == 1) {
    for (int i = i_lo; i <= i_hi; ++i) {
      if (std::abs(g.lo()[0] + i * h - x0[0]) <= rho) out.push_back(i);
    }
    return out;
  }
  const int j_lo = std::max(0, int(std::ceil((x0[1] - rho - g.lo()[1]) / h)));
  const int j_hi =
      std::min(n - 1, int(std::floor((x0[1] + rho - g.lo()[1]) / h)));
  const double r2 = rho * rho;
  for (int j = j_lo; j <= j_hi; ++j) {
    for (int i = i_lo; i <= i_hi; ++i) {
      const Point x{g.lo()[0] + i * h, g.lo()[1] + j * h};
      if (dist2(x, x0) <= r2 * (1.0 + 1e-14)) out.push_back(g.index(i, j));
    }
  }
  return out;
}

}  // namespace

LevelDecomposition LevelDecomposition::build(const ScalarField& u,
                                             double eps) {
  LevelDecomposition level;
  level.eps = eps;
  const Grid& g = u.grid;
  const int n = g.n_per_axis();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    (u[k] <= eps ? level.sublevel : level.positivity).push_back(k);
  }
  const auto edge = [&](std::size_t k1, std::size_t k2) {
    const double a = u[k1] - eps;
    const double b = u[k2] - eps;
    if (a == 0.0) return;  // node itself added below
    if (a * b < 0.0) {
      const double t = a / (a - b);
      const Point p1 = g.coords(k1);
      const Point p2 = g.coords(k2);
      level.interface_points.push_back(
          {p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1])});
    }
  };
  const auto touches_positive = [&](std::size_t k) {
    const auto [i, j] = g.ij(k);
    if (i > 0 && u[k - 1] > eps) return true;
    if (i + 1 < n && u[k + 1] > eps) return true;
    if (g.dim() == 2 && j > 0 && u[g.index(i, j - 1)] > eps) return true;
    if (g.dim() == 2 && j + 1 < n && u[g.index(i, j + 1)] > eps) return true;
    return false;
  };
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    // a node sitting exactly on the level belongs to the interface only when
    // it borders the positivity set; flat plateaus stay out of the cloud
    if (u[k] == eps && touches_positive(k)) {
      level.interface_points.push_back(g.coords(k));
    }
    const auto [i, j] = g.ij(k);
    if (i + 1 < n) edge(k, k + 1);
    if (g.dim() == 2 && j + 1 < n) edge(k, g.index(i, j + 1));
  }
  return level;
}

DistanceField DistanceField::build(const ScalarField& u,
                                   const LevelDecomposition& level) {
  DistanceField df;
  df.d = distance_to_cloud(u.grid, level.interface_points);
  for (std::size_t k : level.sublevel) df.d[k] = 0.0;
  return df;
}

MeasureSample lipschitz_constant(const ScalarField& u, const Subdomain& sub,
                                 const StencilOperator& op) {
  const Grid& g = u.grid;
  const int n = g.n_per_axis();
  const double h = g.h();
  MeasureSample out;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!sub.contains(k) || g.is_boundary(k)) continue;
    const auto [i, j] = g.ij(k);
    int ring = std::min(i, n - 1 - i);
    if (g.dim() == 2) ring = std::min({ring, j, n - 1 - j});
    const int w = ring >= op.width() ? op.width() : 1;
    double slope = 0.0;
    if (g.dim() == 1) {
      slope = std::max(std::abs(u[k + 1] - u[k]), std::abs(u[k - 1] - u[k])) / h;
    } else {
      for (const StencilDirection& d : op.directions(w)) {
        const double up = u[g.index(i + d.dx, j + d.dy)];
        const double um = u[g.index(i - d.dx, j - d.dy)];
        slope = std::max(slope, std::max(std::abs(up - u[k]),
                                         std::abs(um - u[k])) /
                                    (d.norm * h));
      }
    }
    out.value = std::max(out.value, slope);
    ++out.samples;
  }
  if (out.samples == 0) throw std::invalid_argument("lipschitz: empty subdomain");
  return out;
}

std::pair<MeasureSample, MeasureSample> growth_constants(
    const ScalarField& u, double eps, const Subdomain& sub) {
  const Grid& g = u.grid;
  const auto level = LevelDecomposition::build(u, eps);
  const auto df = DistanceField::build(u, level);
  const double cutoff = std::max(eps, 2.0 * g.h());
  MeasureSample cmin, cmax;
  cmin.value = kInf;
  cmax.value = 0.0;
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (!sub.contains(k)) continue;
    const double d = df.d[k];
    if (!(d >= cutoff) || d == kInf) continue;
    const double ratio = u[k] / d;
    cmin.value = std::min(cmin.value, ratio);
    cmax.value = std::max(cmax.value, ratio);
    ++cmin.samples;
    ++cmax.samples;
  }
  if (cmin.samples == 0) {
    cmin.value = cmax.value = 0.0;  // vacuous, flagged by samples == 0
  }
  return {cmin, cmax};
}

NondegeneracyResult nondegeneracy(const ScalarField& u, double eps,
                                  const Subdomain& sub,
                                  const std::vector<double>& rho_list,
                                  std::size_t max_samples,
                                  std::uint64_t seed) {
  const Grid& g = u.grid;
  const auto level = LevelDecomposition::build(u, eps);
  const auto df = DistanceField::build(u, level);
  std::vector<std::size_t> candidates;
  for (std::size_t k : level.positivity) {
    if (sub.contains(k) && df.d[k] <= 2.0 * g.h()) candidates.push_back(k);
  }
  candidates = subsample(std::move(candidates), max_samples, seed);
  NondegeneracyResult res;
  res.lower.value = kInf;
  res.upper.value = 0.0;
  for (std::size_t k : candidates) {
    const Point x0 = g.coords(k);
    for (double rho : rho_list) {
      if (rho < eps) continue;
      if (g.boundary_distance(k) < rho + sub.margin - 1e-12) {
        ++res.skipped;
        continue;
      }
      const auto nodes = ball_nodes(g, x0, rho);
      double sup = -kInf;
      for (std::size_t m : nodes) sup = std::max(sup, u[m]);
      if (nodes.empty()) continue;
      res.lower.value = std::min(res.lower.value, sup / rho);
      res.upper.value = std::max(res.upper.value, sup / (rho + u[k]));
      ++res.lower.samples;
      ++res.upper.samples;
    }
  }
  if (res.lower.samples == 0) res.lower.value = 0.0;
  return res;
}

HarnackResult harnack_ratio(const ScalarField& u, double eps,
                            std::size_t max_samples, std::uint64_t seed) {
  const Grid& g = u.grid;
  const auto level = LevelDecomposition::build(u, eps);
  const auto df = DistanceField::build(u, level);
  const double cutoff = std::max(eps, 4.0 * g.h());
  std::vector<std::size_t> candidates;
  for (std::size_t k : level.positivity) {
    if (df.d[k] >= cutoff && df.d[k] < kInf) candidates.push_back(k);
  }
  candidates = subsample(std::move(candidates), max_samples, seed);
  HarnackResult res;
  for (std::size_t k : candidates) {
    const double d = df.d[k];
    const double rho = 0.5 * d;
    if (g.boundary_distance(k) < rho - 1e-12) {
      ++res.skipped;
      continue;
    }
    const auto nodes = ball_nodes(g, g.coords(k), rho);
    if (nodes.empty()) continue;
    double sup = -kInf, inf = kInf;
    for (std::size_t m : nodes) {
      sup = std::max(sup, u[m]);
      inf = std::min(inf, u[m]);
    }
    if (inf <= 0.0) {
      res.inf_zero = true;
      continue;
    }
    res.ratio.value = std::max(res.ratio.value, sup / inf);
    ++res.ratio.samples;
  }
  return res;
}

double density(const ScalarField& u, double eps, const Point& x0, double rho) {
  const Grid& g = u.grid;
  if (rho < g.h()) {
    throw std::invalid_argument("density: ball smaller than one cell");
  }
  const auto nodes = ball_nodes(g, x0, rho);
  if (nodes.empty()) throw std::invalid_argument("density: empty ball");
  std::size_t pos = 0;
  for (std::size_t m : nodes) {
    if (u[m] > eps) ++pos;
  }
  return double(pos) / double(nodes.size());
}

MeasureSample porosity(const ScalarField& u, double eps, double R,
                       const std::vector<double>& r_list,
                       std::size_t max_samples, std::uint64_t seed) {
  const Grid& g = u.grid;
  const auto level = LevelDecomposition::build(u, eps);
  MeasureSample out;
  if (level.interface_points.empty()) return out;  // vacuous
  const auto dist_if = distance_to_cloud(g, level.interface_points);
  const auto centers = subsample(level.interface_points, max_samples, seed);
  out.value = kInf;
  for (const Point& x : centers) {
    for (double r : r_list) {
      if (!(r > 0.0) || r >= R) continue;
      double best = 0.0;
      for (std::size_t m : ball_nodes(g, x, r)) {
        const double slack = r - std::sqrt(dist2(g.coords(m), x));
        best = std::max(best, std::min(dist_if[m], slack) / r);
      }
      out.value = std::min(out.value, best);
      ++out.samples;
    }
  }
  if (out.samples == 0) out.value = 0.0;
  return out;
}

std::vector<std::pair<double, double>> minkowski_content(
    const ScalarField& u, double eps, const std::vector<double>& delta_list,
    double rho, const Point& x0) {
  const Grid& g = u.grid;
  const auto level = LevelDecomposition::build(u, eps);
  std::vector<std::pair<double, double>> out;
  std::vector<double> dist_if;
  if (!level.interface_points.empty()) {
    dist_if = distance_to_cloud(g, level.interface_points);
  }
  const double cell = g.dim() == 2 ? g.h() * g.h() : g.h();
  for (double delta : delta_list) {
    if (delta < 2.0 * g.h() - 1e-12) continue;  // under-resolved, skip
    if (level.interface_points.empty()) {
      out.emplace_back(delta, 0.0);
      continue;
    }
    std::size_t count = 0;
    for (std::size_t m : ball_nodes(g, x0, rho)) {
      if (dist_if[m] <= delta) ++count;
    }
    out.emplace_back(delta, count * cell / (2.0 * delta));
  }
  return out;
}

double mean_boundary_value(const ScalarField& u, const Point& x0, double rho) {
  const Grid& g = u.grid;
  const double h = g.h();
  const auto interp = [&](const Point& x) {
    if (x[0] < g.lo()[0] - 1e-12 || x[0] > g.hi()[0] + 1e-12 ||
        (g.dim() == 2 &&
         (x[1] < g.lo()[1] - 1e-12 || x[1] > g.hi()[1] + 1e-12))) {
      throw std::invalid_argument("mean_boundary_value: sphere exits domain");
    }
    const double fx = std::clamp((x[0] - g.lo()[0]) / h, 0.0,
                                 double(g.n_per_axis() - 1));
    const int i = std::min(int(fx), g.n_per_axis() - 2);
    const double tx = fx - i;
    if (g.dim() == 1) {
      return (1.0 - tx) * u[i] + tx * u[i + 1];
    }
    const double fy = std::clamp((x[1] - g.lo()[1]) / h, 0.0,
                                 double(g.n_per_axis() - 1));
    const int j = std::min(int(fy), g.n_per_axis() - 2);
    const double ty = fy - j;
    return (1.0 - tx) * (1.0 - ty) * u[g.index(i, j)] +
           tx * (1.0 - ty) * u[g.index(i + 1, j)] +
           (1.0 - tx) * ty * u[g.index(i, j + 1)] +
           tx * ty * u[g.index(i + 1, j + 1)];
  };
  if (u.grid.dim() == 1) {
    return 0.5 * (interp({x0[0] - rho, 0.0}) + interp({x0[0] + rho, 0.0}));
  }
  const int n_angles = 512;
  double sum = 0.0;
  for (int a = 0; a < n_angles; ++a) {
    const double th = 2.0 * M_PI * a / n_angles;
    sum += interp({x0[0] + rho * std::cos(th), x0[1] + rho * std::sin(th)});
  }
  return sum / n_angles;
}

GeometryReport measure_geometry(const ScalarField& u, double eps,
                                const StencilOperator& op,
                                const GeometryOptions& opts) {
  const Grid& g = u.grid;
  const double h = g.h();
  GeometryReport rep;
  rep.eps = eps;
  const double margin = opts.margin > 0.0 ? opts.margin : 4.0 * h;
  const Subdomain sub(g, margin);

  std::vector<double> rho_list = opts.rho_list;
  if (rho_list.empty()) rho_list = {8.0 * h, 16.0 * h, 32.0 * h};
  std::vector<double> delta_list = opts.delta_list;
  if (delta_list.empty()) delta_list = {4.0 * h, 8.0 * h, 16.0 * h};

  rep.lipschitz = lipschitz_constant(u, sub, op);
  std::tie(rep.growth_c_min, rep.growth_C_max) = growth_constants(u, eps, sub);

  const auto ndg = nondegeneracy(u, eps, sub, rho_list, opts.max_samples,
                                 opts.seed);
  rep.nondeg_c = ndg.lower;
  rep.nondeg_upper = ndg.upper;
  rep.skipped_balls += ndg.skipped;

  const auto har = harnack_ratio(u, eps, opts.max_samples, opts.seed + 1);
  rep.harnack_C = har.ratio;
  rep.skipped_balls += har.skipped;

  const auto level = LevelDecomposition::build(u, eps);
  if (!level.interface_points.empty()) {
    const auto centers =
        subsample(level.interface_points, opts.max_samples, opts.seed + 2);
    MeasureSample dens;
    dens.value = 1.0;
    for (const Point& x0 : centers) {
      for (double rho : rho_list) {
        bool outside = false;
        const auto nodes = ball_nodes(g, x0, rho, &outside);
        if (outside || nodes.empty()) {
          ++rep.skipped_balls;
          continue;
        }
        dens.value = std::min(dens.value, density(u, eps, x0, rho));
        ++dens.samples;
      }
    }
    rep.density_c0 = dens;

    const double R = 2.0 * rho_list.back();
    rep.porosity_delta =
        porosity(u, eps, R, {rho_list[0], rho_list[std::min<std::size_t>(
                                              1, rho_list.size() - 1)]},
                 opts.max_samples, opts.seed + 3);

    // Minkowski ball centered at the interface point nearest the domain
    // center, radius as large as the domain allows.
    const Point center{0.5 * (g.lo()[0] + g.hi()[0]),
                       0.5 * (g.lo()[1] + g.hi()[1])};
    Point x0 = level.interface_points.front();
    double best = kInf;
    for (const Point& p : level.interface_points) {
      const double d2 = dist2(p, center);
      if (d2 < best) {
        best = d2;
        x0 = p;
      }
    }
    double rho = std::min({x0[0] - g.lo()[0], g.hi()[0] - x0[0]});
    if (g.dim() == 2) {
      rho = std::min({rho, x0[1] - g.lo()[1], g.hi()[1] - x0[1]});
    }
    rho -= h;
    if (rho > delta_list.front()) {
      rep.minkowski = minkowski_content(u, eps, delta_list, rho, x0);
    }

    std::size_t near = 0;
    const auto dist_if = distance_to_cloud(g, level.interface_points);
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      if (dist_if[k] <= h) ++near;
    }
    rep.interface_node_fraction = double(near) / double(g.node_count());
  }
  return rep;
}

}  // namespace inflap
