#pragma once

#include "inflap/grid.hpp"
#include "inflap/reaction.hpp"

namespace inflap {

// One-dimensional two-point problem u'' (u')^2 = zeta_eps(u) on (x_lo, x_hi)
// with nonnegative boundary values. The reaction is taken x-independent here
// (constant noise term), as in the one-dimensional reduction.
struct OneDProblem {
  ReactionTerm rt;
  double x_lo = -1.0;
  double x_hi = 1.0;
  double u_left = 0.5;
  double u_right = 0.5;
  double step = 1e-4;       // RK4 step in x
  double shoot_max = 10.0;  // bracket scan bound for u'(x_lo)
  double mismatch_tol = 1e-8;
};

struct TrajectoryPoint {
  double x = 0.0;
  double u = 0.0;
  double du = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // ordered by x
  // index ranges [first, last] of maximal arcs with du of one sign
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  double boundary_mismatch = 0.0;
  bool contact = false;  // has a coincidence segment u == 0
  double contact_lo = 0.0;
  double contact_hi = 0.0;
  double shot_slope = 0.0;  // u'(x_lo) actually used
};

// Shooting integration; monotone arcs by fixed-step RK4, passes through
// u' = 0 reconstructed from the first integral (u')^4/4 - Xi(u).
Trajectory integrate(const OneDProblem& p);

// Max oscillation of (u')^4/4 - Xi(u) over each monotone arc.
double first_integral_drift(const OneDProblem& p, const Trajectory& tr);

struct SlopeCrossing {
  double x = 0.0;
  double slope = 0.0;  // |u'| at the crossing
};

// |u'| where u crosses the threshold, one entry per crossing.
std::vector<SlopeCrossing> fb_slope(const Trajectory& tr, double threshold);

// The limit law value (4 * integral of the bump)^(1/4).
double predicted_slope(const ReactionTerm& rt);

struct DirectionalBoundReport {
  bool pass = false;
  bool vacuous = false;
  double predicted = 0.0;
  double worst = 0.0;  // largest measured |du/dx_axis| at the sampled points
  std::size_t samples = 0;
};

// Checks |du/dx_axis| <= predicted + tolerance by one-sided differences into
// the positivity set {u > threshold}, at edges crossing the threshold.
DirectionalBoundReport directional_bound_check(const ScalarField& u2d,
                                               int axis,
                                               const ReactionTerm& rt,
                                               double threshold,
                                               double tolerance);

}  // namespace inflap
