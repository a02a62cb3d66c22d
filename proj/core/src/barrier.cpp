#include "inflap/barrier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace inflap {

BarrierParams BarrierParams::make(double a, double b, double A0, double alpha,
                                  double L, double kappa0) {
  if (!(0.0 < a && a < b && b < 1.0)) {
    throw std::invalid_argument("barrier: need 0 < a < b < 1");
  }
  if (!(A0 > 0.0) || !(alpha > 1.0)) {
    throw std::invalid_argument("barrier: need A0 > 0 and alpha > 1");
  }
  BarrierParams bp;
  bp.a = a;
  bp.b = b;
  bp.A0 = A0;
  bp.alpha = alpha;
  bp.L0 = std::sqrt((b - a) / A0);
  if (!(L >= bp.L0)) {
    throw std::invalid_argument("barrier: need L >= L0");
  }
  bp.L = L;
  bp.phi = 2.0 / alpha * std::sqrt((b - a) * A0) *
           std::pow(L + bp.L0, 1.0 + alpha);
  bp.psi = b + bp.phi * std::pow(L + bp.L0, -alpha);
  bp.kappa0 = kappa0;
  return bp;
}

double eval_barrier(const BarrierParams& bp, double r) {
  if (r < bp.L) return bp.a;
  if (r < bp.L + bp.L0) {
    const double d = r - bp.L;
    return bp.A0 * d * d + bp.a;
  }
  return bp.psi - bp.phi * std::pow(r, -bp.alpha);
}

double eval_barrier(const BarrierParams& bp, const Point& x) {
  return eval_barrier(bp, std::hypot(x[0], x[1]));
}

double closed_form_inf_laplacian(const BarrierParams& bp, double r) {
  if (r < bp.L) return 0.0;
  // radial identity theta'' (theta')^2 = 2 A0 (2 A0 d)^2
  if (r < bp.L + bp.L0) {
    const double d = r - bp.L;
    return 8.0 * bp.A0 * bp.A0 * bp.A0 * d * d;
  }
  const double a3 = bp.alpha * bp.alpha * bp.alpha;
  return -a3 * (bp.alpha + 1.0) * bp.phi * bp.phi * bp.phi *
         std::pow(r, -(3.0 * bp.alpha + 4.0));
}

SupersolutionReport verify_supersolution(const BarrierParams& bp,
                                         const ReactionTerm& rt,
                                         const std::vector<double>& radii) {
  SupersolutionReport rep;
  const auto ndg = verify_nondegeneracy(rt, {});
  rep.inf_zeta_band = ndg.value;
  const double lhs = std::pow(2.0 * std::sqrt(bp.A0 * (bp.b - bp.a)), 3.0);
  rep.small_A0_ok = lhs <= ndg.value;

  rep.worst_gap = -std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double theta = eval_barrier(bp, r);
    const double lap = closed_form_inf_laplacian(bp, r);
    const double zeta = rt.eval_scaled({r, 0.0}, theta);
    const double gap = lap - zeta;
    if (gap > rep.worst_gap) {
      rep.worst_gap = gap;
      rep.worst_r = r;
    }
  }
  rep.pass = rep.small_A0_ok && rep.worst_gap <= 0.0;
  return rep;
}

GrowthReport growth_check(const BarrierParams& bp) {
  GrowthReport rep;
  const double R = 4.0 * bp.L;
  rep.kappa0_effective = eval_barrier(bp, R) / R;

  rep.monotone = true;
  const double r_max = 2.0 * (bp.L + bp.L0) + 4.0 * bp.L;
  double prev = eval_barrier(bp, 0.0);
  const int steps = 4096;
  for (int k = 1; k <= steps; ++k) {
    const double v = eval_barrier(bp, r_max * k / steps);
    if (v < prev - 1e-12 * (1.0 + std::abs(prev))) rep.monotone = false;
    prev = v;
  }
  const double want = bp.kappa0 > 0.0 ? bp.kappa0 : rep.kappa0_effective;
  rep.pass = rep.monotone && rep.kappa0_effective > 0.0 &&
             rep.kappa0_effective >= want - 1e-12;
  return rep;
}

double eval_scaled_barrier(double a, double b, double A0, double alpha,
                           double eps, double eta, const Point& x) {
  if (!(eps > 0.0)) throw std::invalid_argument("scaled barrier: eps > 0");
  const double L0 = std::sqrt((b - a) / A0);
  if (4.0 * L0 * eps > eta) {
    throw std::invalid_argument("scaled barrier: need 4 L0 eps <= eta");
  }
  const BarrierParams bp = BarrierParams::make(a, b, A0, alpha,
                                               eta / (4.0 * eps));
  return eps * eval_barrier(bp, {x[0] / eps, x[1] / eps});
}

}  // namespace inflap
