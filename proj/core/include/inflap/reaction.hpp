#pragma once

#include <string>

#include "inflap/grid.hpp"

namespace inflap {

// Bump profile on [0,1]: nonnegative, C^1 on the line, zero outside [0,1].
// `scale` multiplies the catalogue profile (and with it the total mass).
struct BumpProfile {
  enum class Kind { Zero, Bump6, Bump30 };

  Kind kind = Kind::Bump6;
  double scale = 1.0;

  double operator()(double t) const;
  double derivative(double t) const;
  // Antiderivative: integral of the profile over [0, t], closed form.
  double cumulative(double t) const;
  double max_value() const;

  static BumpProfile parse(const std::string& name, double scale = 1.0);
  std::string name() const;
};

// Spatial noise term g with c0 <= g(x) <= c1.
struct NoiseTerm {
  enum class Kind { Constant, AffineX };

  Kind kind = Kind::Constant;
  double c0 = 0.0;
  double c1 = 0.0;
  // AffineX: c0 + (c1-c0) * clamp((x - x_lo)/(x_hi - x_lo)), along axis 0.
  double x_lo = 0.0;
  double x_hi = 1.0;

  double operator()(const Point& x) const;
};

struct EnvelopeReport {
  bool pass = false;
  double worst_violation = 0.0;  // max over samples of the exceeded amount
  Point worst_x{0.0, 0.0};
  double worst_t = 0.0;
};

struct NondegeneracyReport {
  double value = 0.0;  // min over samples of eps * zeta(x, eps t), t in [a,b]
  bool positive = false;
  double worst_t = 0.0;
};

// Singular reaction zeta_eps(x,t) = (1/eps) * beta(t/eps) + g(x).
struct ReactionTerm {
  double eps = 0.1;
  BumpProfile beta;
  NoiseTerm g;
  double envelope_B = 0.0;  // bound on the bump part of the envelope
  double envelope_C = 0.0;  // bound on the noise part
  double band_a = 0.25;     // band for the non-degeneracy constant
  double band_b = 0.75;

  // t < 0 is a domain error.
  double eval(const Point& x, double t) const;

  // eps * zeta(x, eps*t) = beta(t) + eps * g(x).
  double eval_scaled(const Point& x, double t) const;

  // Integral of zeta from 0 to t (in the t variable): the Xi_eps primitive.
  double primitive(const Point& x, double t) const;

  double sup_bound() const;  // sup over (x,t) of the envelope B/eps + C
};

EnvelopeReport verify_envelope(const ReactionTerm& rt,
                               const std::vector<Point>& x_samples,
                               int t_samples = 10000);

NondegeneracyReport verify_nondegeneracy(const ReactionTerm& rt,
                                         const std::vector<Point>& x_samples,
                                         int t_samples = 10000);

// Integral of beta over [0,1] by adaptive quadrature, abs error <= 1e-10.
double beta_integral(const ReactionTerm& rt);

}  // namespace inflap
