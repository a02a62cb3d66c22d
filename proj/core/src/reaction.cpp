#include "inflap/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace inflap {

double BumpProfile::operator()(double t) const {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Bump6:
      return scale * 6.0 * t * (1.0 - t);
    case Kind::Bump30: {
      const double s = t * (1.0 - t);
      return scale * 30.0 * s * s;
    }
  }
  return 0.0;
}

double BumpProfile::derivative(double t) const {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Bump6:
      return scale * 6.0 * (1.0 - 2.0 * t);
    case Kind::Bump30:
      return scale * 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
  }
  return 0.0;
}

double BumpProfile::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  const double u = std::min(t, 1.0);
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Bump6:
      return scale * (3.0 * u * u - 2.0 * u * u * u);
    case Kind::Bump30:
      return scale * (10.0 * u * u * u - 15.0 * u * u * u * u +
                      6.0 * u * u * u * u * u);
  }
  return 0.0;
}

double BumpProfile::max_value() const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Bump6:
      return scale * 1.5;  // at t = 1/2
    case Kind::Bump30:
      return scale * 30.0 / 16.0;  // at t = 1/2
  }
  return 0.0;
}

BumpProfile BumpProfile::parse(const std::string& name, double scale) {
  BumpProfile b;
  b.scale = scale;
  if (name == "zero") {
    b.kind = Kind::Zero;
  } else if (name == "bump6") {
    b.kind = Kind::Bump6;
  } else if (name == "bump30") {
    b.kind = Kind::Bump30;
  } else {
    throw std::invalid_argument("unknown bump profile: " + name);
  }
  return b;
}

std::string BumpProfile::name() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Bump6:
      return "bump6";
    case Kind::Bump30:
      return "bump30";
  }
  return "?";
}

double NoiseTerm::operator()(const Point& x) const {
  switch (kind) {
    case Kind::Constant:
      return c0;
    case Kind::AffineX: {
      const double w = x_hi > x_lo ? (x[0] - x_lo) / (x_hi - x_lo) : 0.0;
      return c0 + (c1 - c0) * std::clamp(w, 0.0, 1.0);
    }
  }
  return 0.0;
}

double ReactionTerm::eval(const Point& x, double t) const {
  if (t < 0.0) throw std::domain_error("zeta: t must be nonnegative");
  return beta(t / eps) / eps + g(x);
}

double ReactionTerm::eval_scaled(const Point& x, double t) const {
  return beta(t) + eps * g(x);
}

double ReactionTerm::primitive(const Point& x, double t) const {
  if (t <= 0.0) return 0.0;
  return beta.cumulative(t / eps) + g(x) * t;
}

double ReactionTerm::sup_bound() const {
  return envelope_B / eps + envelope_C;
}

EnvelopeReport verify_envelope(const ReactionTerm& rt,
                               const std::vector<Point>& x_samples,
                               int t_samples) {
  EnvelopeReport rep;
  rep.pass = true;
  std::vector<Point> xs = x_samples;
  if (xs.empty()) xs.push_back({0.0, 0.0});
  // Scan t/eps over [0, 1.5]; beyond the support only the noise term is left.
  for (int k = 0; k <= t_samples; ++k) {
    const double tau = 1.5 * k / t_samples;
    const double t = tau * rt.eps;
    for (const Point& x : xs) {
      const double z = rt.eval(x, t);
      const double cap =
          (t > 0.0 && t < rt.eps ? rt.envelope_B / rt.eps : 0.0) +
          rt.envelope_C;
      const double violation = std::max(z - cap, -z);
      if (violation > rep.worst_violation) {
        rep.worst_violation = violation;
        rep.worst_x = x;
        rep.worst_t = t;
      }
    }
  }
  rep.pass = rep.worst_violation <= 0.0;
  return rep;
}

NondegeneracyReport verify_nondegeneracy(const ReactionTerm& rt,
                                         const std::vector<Point>& x_samples,
                                         int t_samples) {
  if (!(rt.band_a < rt.band_b)) {
    throw std::invalid_argument("nondegeneracy: band requires a < b");
  }
  NondegeneracyReport rep;
  std::vector<Point> xs = x_samples;
  if (xs.empty()) xs.push_back({0.0, 0.0});
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= t_samples; ++k) {
    const double t = rt.band_a + (rt.band_b - rt.band_a) * k / t_samples;
    for (const Point& x : xs) {
      const double v = rt.eval_scaled(x, t);
      if (v < best) {
        best = v;
        rep.worst_t = t;
      }
    }
  }
  rep.value = best;
  rep.positive = best > 0.0;
  return rep;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double beta_integral(const ReactionTerm& rt) {
  const auto f = [&rt](double t) { return rt.beta(t); };
  const double fa = f(0.0), fm = f(0.5), fb = f(1.0);
  const double whole = (fa + 4.0 * fm + fb) / 6.0;
  return adaptive_simpson(f, 0.0, 1.0, fa, fm, fb, whole, 1e-10, 40);
}

}  // namespace inflap
