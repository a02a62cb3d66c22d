#pragma once

#include <vector>

#include "inflap/reaction.hpp"

namespace inflap {

// Radial barrier: constant core a on |x| < L, parabolic annulus
// A0 (|x|-L)^2 + a on [L, L+L0), power tail psi - phi |x|^-alpha beyond,
// with L0, phi, psi tied together so the pieces match to C^1.
struct BarrierParams {
  double a = 0.25;
  double b = 0.75;
  double A0 = 0.01;
  double alpha = 2.0;
  double L = 0.0;
  double kappa0 = 0.0;  // configured growth constant; 0 = use measured

  // derived
  double L0 = 0.0;
  double phi = 0.0;
  double psi = 0.0;

  static BarrierParams make(double a, double b, double A0, double alpha,
                            double L, double kappa0 = 0.0);
};

double eval_barrier(const BarrierParams& bp, double r);
double eval_barrier(const BarrierParams& bp, const Point& x);

// Closed-form Delta_inf of the barrier per region; at an interface radius
// reports the one-sided value from the left.
double closed_form_inf_laplacian(const BarrierParams& bp, double r);

struct SupersolutionReport {
  bool pass = false;
  bool small_A0_ok = false;    // (2 sqrt(A0 (b-a)))^3 <= inf zeta on [a,b]
  double inf_zeta_band = 0.0;  // the non-degeneracy constant used
  double worst_gap = 0.0;      // max over samples of (closed form - zeta)
  double worst_r = 0.0;
};

// Checks Delta_inf Theta <= zeta(x, Theta) at the sample radii, against the
// band-scaled reaction zeta(x,t) = eps * zeta_eps(x, eps t).
SupersolutionReport verify_supersolution(const BarrierParams& bp,
                                         const ReactionTerm& rt,
                                         const std::vector<double>& radii);

struct GrowthReport {
  double kappa0_effective = 0.0;  // Theta(4L) / (4L)
  bool monotone = false;
  bool pass = false;  // kappa0_effective >= configured kappa0 (> 0)
};

GrowthReport growth_check(const BarrierParams& bp);

// Scaled barrier eps * Theta_{L = eta/(4 eps)}(x / eps); requires the
// admissibility constraint 4 L0 eps <= eta.
double eval_scaled_barrier(double a, double b, double A0, double alpha,
                           double eps, double eta, const Point& x);

}  // namespace inflap
