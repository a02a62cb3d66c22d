#include "inflap/one_dim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inflap {

namespace {

constexpr double kZetaTiny = 1e-12;
constexpr double kTurnSwitch = 0.2;  // |u'| below which arcs are reconstructed
constexpr double kSlopeReg = 1e-6;

struct OneDReaction {
  const ReactionTerm* rt;
  double zeta(double u) const { return rt->eval({0.0, 0.0}, std::max(u, 0.0)); }
  double xi(double u) const { return rt->primitive({0.0, 0.0}, u); }
};

// Arc length in x from the touch point u = 0 up to level U along an arc with
// first integral (u')^4/4 = Xi(u); substitution u = sigma^4 removes the
// endpoint singularity.
double contact_arc_length(const OneDReaction& z, double U) {
  if (U <= 0.0) return 0.0;
  const int n = 20000;
  const double smax = std::pow(U, 0.25);
  const auto f = [&](double s) {
    const double u = s * s * s * s;
    const double w = std::pow(std::max(4.0 * z.xi(u), 0.0), 0.25);
    return w > 0.0 ? 4.0 * s * s * s / w : 0.0;
  };
  double acc = 0.0;
  double prev = f(0.0);
  for (int k = 1; k <= n; ++k) {
    const double cur = f(smax * k / n);
    acc += 0.5 * (prev + cur) * (smax / n);
    prev = cur;
  }
  return acc;
}

// Samples (x_rel, u, w) of the contact arc, x_rel measured from the touch
// point, u ascending from 0 to U.
std::vector<TrajectoryPoint> contact_arc_samples(const OneDReaction& z,
                                                 double U, int n_samples) {
  std::vector<TrajectoryPoint> out;
  if (U <= 0.0) return out;
  const double smax = std::pow(U, 0.25);
  const auto f = [&](double s) {
    const double u = s * s * s * s;
    const double w = std::pow(std::max(4.0 * z.xi(u), 0.0), 0.25);
    return w > 0.0 ? 4.0 * s * s * s / w : 0.0;
  };
  const int n = std::max(n_samples, 64);
  double x = 0.0;
  double prev = f(0.0);
  out.push_back({0.0, 0.0, 0.0});
  for (int k = 1; k <= n; ++k) {
    const double s = smax * k / n;
    const double cur = f(s);
    x += 0.5 * (prev + cur) * (smax / n);
    prev = cur;
    const double u = s * s * s * s;
    out.push_back({x, u, std::pow(std::max(4.0 * z.xi(u), 0.0), 0.25)});
  }
  return out;
}

// x-advance across a turning point from level u1 down to u* and back.
double turning_advance(const OneDReaction& z, double u_star, double u1,
                       double target) {
  const double range = u1 - u_star;
  if (range <= 0.0) return 0.0;
  const int n = 4000;
  const double smax = std::pow(range, 0.25);
  const auto f = [&](double s) {
    const double u = u_star + s * s * s * s;
    const double w = std::pow(std::max(4.0 * (z.xi(u) - target), 0.0), 0.25);
    return w > 0.0 ? 4.0 * s * s * s / w : 0.0;
  };
  double acc = 0.0;
  double prev = f(0.0);
  for (int k = 1; k <= n; ++k) {
    const double cur = f(smax * k / n);
    acc += 0.5 * (prev + cur) * (smax / n);
    prev = cur;
  }
  return 2.0 * acc;
}

struct ShootOutcome {
  double u_end = 0.0;
  bool stalled = false;
};

ShootOutcome shoot(const OneDProblem& p, const OneDReaction& z, double slope0,
                   std::vector<TrajectoryPoint>* record) {
  double x = p.x_lo;
  double u = p.u_left;
  double w = slope0;
  if (record) record->push_back({x, u, w});

  const auto dw = [&](double uu, double ww) {
    const double w2 = std::max(ww * ww, kSlopeReg * kSlopeReg);
    return z.zeta(uu) / w2;
  };

  while (x < p.x_hi - 1e-15) {
    // reconstruct through a turning point once the descending slope is small
    if (w < 0.0 && -w <= kTurnSwitch && z.zeta(u) > kZetaTiny) {
      const double target = z.xi(u) - w * w * w * w / 4.0;  // = -C
      if (target >= 0.0 && target <= z.xi(u)) {
        double lo = 0.0, hi = u;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          (z.xi(mid) < target ? lo : hi) = mid;
        }
        const double u_star = 0.5 * (lo + hi);
        if (z.zeta(u_star) <= kZetaTiny) {
          // reaction vanishes at the turning level: the arc stalls there
          if (record) record->push_back({x, u_star, 0.0});
          return {u_star, true};
        }
        const double adv = turning_advance(z, u_star, u, target);
        if (record) {
          record->push_back({x + 0.5 * adv, u_star, 0.0});
        }
        x += adv;
        w = -w;
        if (record) record->push_back({x, u, w});
        if (x >= p.x_hi) break;
        continue;
      }
    }
    const double dt = std::min(p.step, p.x_hi - x);
    const double k1u = w, k1w = dw(u, w);
    const double k2u = w + 0.5 * dt * k1w, k2w = dw(u + 0.5 * dt * k1u, k2u);
    const double k3u = w + 0.5 * dt * k2w, k3w = dw(u + 0.5 * dt * k2u, k3u);
    const double k4u = w + dt * k3w, k4w = dw(u + dt * k3u, k4u);
    u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    x += dt;
    if (record) record->push_back({x, u, w});
    if (!std::isfinite(u) || !std::isfinite(w)) {
      return {std::numeric_limits<double>::quiet_NaN(), false};
    }
  }
  return {u, false};
}

void mark_arcs(Trajectory& tr) {
  tr.arcs.clear();
  const auto sign = [](double v) {
    if (v > 1e-12) return 1;
    if (v < -1e-12) return -1;
    return 0;
  };
  std::size_t start = 0;
  int cur = sign(tr.points.empty() ? 0.0 : tr.points[0].du);
  for (std::size_t k = 1; k < tr.points.size(); ++k) {
    const int s = sign(tr.points[k].du);
    if (s != cur) {
      if (cur != 0 && k - 1 > start) tr.arcs.emplace_back(start, k - 1);
      start = k;
      cur = s;
    }
  }
  if (cur != 0 && tr.points.size() >= 2 && tr.points.size() - 1 > start) {
    tr.arcs.emplace_back(start, tr.points.size() - 1);
  }
}

}  // namespace

Trajectory integrate(const OneDProblem& p) {
  if (p.u_left < 0.0 || p.u_right < 0.0) {
    throw std::invalid_argument("one_dim: boundary values must be >= 0");
  }
  if (std::max(p.u_left, p.u_right) <= p.rt.eps) {
    throw std::invalid_argument(
        "one_dim: need a boundary value above eps for a positive region");
  }
  const OneDReaction z{&p.rt};
  Trajectory tr;

  // Contact solution: both wings ride the zero-constant first integral and
  // meet a coincidence segment u == 0. Requires zeta(0) == 0.
  if (z.zeta(0.0) <= kZetaTiny && z.xi(std::max(p.u_left, p.u_right)) > 0.0) {
    const double len_l = contact_arc_length(z, p.u_left);
    const double len_r = contact_arc_length(z, p.u_right);
    const double xt_l = p.x_lo + len_l;
    const double xt_r = p.x_hi - len_r;
    if (xt_l <= xt_r + 1e-12) {
      tr.contact = true;
      tr.contact_lo = xt_l;
      tr.contact_hi = xt_r;
      const int n_arc = std::max(
          200, int((std::max(len_l, len_r)) / std::max(p.step, 1e-6)));
      const auto left = contact_arc_samples(z, p.u_left, n_arc);
      for (auto it = left.rbegin(); it != left.rend(); ++it) {
        tr.points.push_back({xt_l - it->x, it->u, -it->du});
      }
      const int n_flat =
          std::max(2, int((xt_r - xt_l) / std::max(p.step, 1e-6)));
      for (int k = 1; k < n_flat; ++k) {
        tr.points.push_back({xt_l + (xt_r - xt_l) * k / n_flat, 0.0, 0.0});
      }
      for (const auto& q : contact_arc_samples(z, p.u_right, n_arc)) {
        tr.points.push_back({xt_r + q.x, q.u, q.du});
      }
      tr.boundary_mismatch = 0.0;
      tr.shot_slope = tr.points.empty() ? 0.0 : tr.points.front().du;
      mark_arcs(tr);
      return tr;
    }
  }

  // Shooting with a bracket scan over the initial slope.
  const auto end_value = [&](double s) {
    return shoot(p, z, s, nullptr).u_end - p.u_right;
  };
  const int scan = 400;
  double lo = 0.0, hi = 0.0;
  bool found = false;
  double prev_s = -p.shoot_max;
  double prev_f = end_value(prev_s);
  for (int k = 1; k <= scan && !found; ++k) {
    const double s = -p.shoot_max + 2.0 * p.shoot_max * k / scan;
    const double f = end_value(s);
    if (std::isfinite(prev_f) && std::isfinite(f) &&
        ((prev_f <= 0.0 && f >= 0.0) || (prev_f >= 0.0 && f <= 0.0))) {
      lo = prev_s;
      hi = s;
      found = true;
    }
    prev_s = s;
    prev_f = f;
  }
  if (!found) {
    throw std::runtime_error(
        "one_dim: shooting bracket not found in [-" +
        std::to_string(p.shoot_max) + ", " + std::to_string(p.shoot_max) +
        "]; scanned " + std::to_string(scan + 1) + " slopes");
  }
  double flo = end_value(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = end_value(mid);
    if (std::abs(fm) <= p.mismatch_tol) {
      lo = hi = mid;
      break;
    }
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-17 * std::max(1.0, std::abs(lo))) break;
  }
  const double s_final = 0.5 * (lo + hi);
  const auto outcome = shoot(p, z, s_final, &tr.points);
  tr.boundary_mismatch = std::abs(outcome.u_end - p.u_right);
  tr.shot_slope = s_final;
  mark_arcs(tr);
  return tr;
}

double first_integral_drift(const OneDProblem& p, const Trajectory& tr) {
  const OneDReaction z{&p.rt};
  double drift = 0.0;
  for (const auto& [first, last] : tr.arcs) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = first; k <= last; ++k) {
      const double w = tr.points[k].du;
      const double inv = w * w * w * w / 4.0 - z.xi(tr.points[k].u);
      lo = std::min(lo, inv);
      hi = std::max(hi, inv);
    }
    drift = std::max(drift, hi - lo);
  }
  return drift;
}

std::vector<SlopeCrossing> fb_slope(const Trajectory& tr, double threshold) {
  std::vector<SlopeCrossing> out;
  for (std::size_t k = 0; k + 1 < tr.points.size(); ++k) {
    const double a = tr.points[k].u - threshold;
    const double b = tr.points[k + 1].u - threshold;
    if (a * b < 0.0) {
      const double t = a / (a - b);
      out.push_back(
          {tr.points[k].x + t * (tr.points[k + 1].x - tr.points[k].x),
           std::abs(tr.points[k].du +
                    t * (tr.points[k + 1].du - tr.points[k].du))});
    }
  }
  return out;
}

double predicted_slope(const ReactionTerm& rt) {
  return std::pow(4.0 * beta_integral(rt), 0.25);
}

DirectionalBoundReport directional_bound_check(const ScalarField& u, int axis,
                                               const ReactionTerm& rt,
                                               double threshold,
                                               double tolerance) {
  const Grid& g = u.grid;
  if (g.dim() != 2) {
    throw std::invalid_argument("directional_bound_check: needs a 2D field");
  }
  if (axis != 0 && axis != 1) {
    throw std::invalid_argument("directional_bound_check: axis must be 0 or 1");
  }
  DirectionalBoundReport rep;
  rep.predicted = predicted_slope(rt);
  const int n = g.n_per_axis();
  const double h = g.h();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    if (u[k] <= threshold) continue;
    const auto [i, j] = g.ij(k);
    // free boundary nodes: positivity nodes with a sublevel 4-neighbor
    bool fb = false;
    const auto probe = [&](int ii, int jj) {
      if (ii < 0 || jj < 0 || ii >= n || jj >= n) return;
      if (u[g.index(ii, jj)] <= threshold) fb = true;
    };
    probe(i - 1, j);
    probe(i + 1, j);
    probe(i, j - 1);
    probe(i, j + 1);
    if (!fb) continue;
    // one-sided differences along the requested axis into the positivity set
    const auto measure = [&](int ii, int jj) {
      if (ii < 0 || jj < 0 || ii >= n || jj >= n) return;
      const std::size_t m = g.index(ii, jj);
      if (u[m] <= threshold) return;
      rep.worst = std::max(rep.worst, std::abs(u[m] - u[k]) / h);
      ++rep.samples;
    };
    if (axis == 0) {
      measure(i - 1, j);
      measure(i + 1, j);
    } else {
      measure(i, j - 1);
      measure(i, j + 1);
    }
  }
  rep.vacuous = rep.samples == 0;
  rep.pass = rep.vacuous || rep.worst <= rep.predicted + tolerance;
  return rep;
}

}  // namespace inflap
