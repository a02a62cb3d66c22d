#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "inflap/grid.hpp"
#include "inflap/stencil.hpp"

namespace inflap {

// Level decomposition at height eps: the sublevel set {0 <= u <= eps}, the
// positivity set {u > eps}, and the interface located by linear
// interpolation along grid edges where u - eps changes sign.
struct LevelDecomposition {
  double eps = 0.0;
  std::vector<std::size_t> sublevel;    // Omega_eps nodes
  std::vector<std::size_t> positivity;  // {u > eps} nodes
  std::vector<Point> interface_points;  // Gamma_eps point cloud

  static LevelDecomposition build(const ScalarField& u, double eps);
};

// Exact Euclidean distance to the sublevel region: zero on sublevel nodes,
// otherwise distance to the interface point cloud (brute force).
struct DistanceField {
  std::vector<double> d;

  static DistanceField build(const ScalarField& u,
                             const LevelDecomposition& level);
};

struct MeasureSample {
  double value = 0.0;
  std::size_t samples = 0;
  bool vacuous() const { return samples == 0; }
};

struct GeometryReport {
  double eps = 0.0;
  MeasureSample lipschitz;
  MeasureSample growth_c_min;
  MeasureSample growth_C_max;
  MeasureSample nondeg_c;        // min over samples of sup_{B_rho} u / rho
  MeasureSample nondeg_upper;    // max of sup_{B_rho} u / (rho + u(x0))
  MeasureSample harnack_C;       // max of sup/inf on touching half-balls
  MeasureSample density_c0;      // min over FB balls of |{u>eps} cap B|/|B|
  MeasureSample porosity_delta;  // min over samples of the clear-ball ratio
  std::vector<std::pair<double, double>> minkowski;  // (delta, content)
  std::size_t skipped_balls = 0;
  double interface_node_fraction = 0.0;
};

// Max stencil slope over the member nodes of the subdomain.
MeasureSample lipschitz_constant(const ScalarField& u, const Subdomain& sub,
                                 const StencilOperator& op);

// (c_min, C_max) of u / d_eps over member nodes with d_eps >= max(eps, 2h).
std::pair<MeasureSample, MeasureSample> growth_constants(
    const ScalarField& u, double eps, const Subdomain& sub);

// Non-degeneracy ratios over interface-adjacent positivity nodes; balls
// leaving the subdomain are skipped and counted.
struct NondegeneracyResult {
  MeasureSample lower;
  MeasureSample upper;
  std::size_t skipped = 0;
};
NondegeneracyResult nondegeneracy(const ScalarField& u, double eps,
                                  const Subdomain& sub,
                                  const std::vector<double>& rho_list,
                                  std::size_t max_samples, std::uint64_t seed);

struct HarnackResult {
  MeasureSample ratio;
  std::size_t skipped = 0;
  bool inf_zero = false;
};
HarnackResult harnack_ratio(const ScalarField& u, double eps,
                            std::size_t max_samples, std::uint64_t seed);

// Node-counting measure of {u > eps} within the ball over the ball measure.
double density(const ScalarField& u, double eps, const Point& x0, double rho);

// Largest delta such that some ball B_{delta r}(y), y a grid node, fits in
// B_r(x) clear of the interface; minimized over interface samples and r.
MeasureSample porosity(const ScalarField& u, double eps, double R,
                       const std::vector<double>& r_list,
                       std::size_t max_samples, std::uint64_t seed);

// (delta, volume of the delta-neighborhood of the interface within
// B_rho(x0) divided by 2 delta) per requested delta.
std::vector<std::pair<double, double>> minkowski_content(
    const ScalarField& u, double eps, const std::vector<double>& delta_list,
    double rho, const Point& x0);

// Average of u over the sphere of radius rho, by angle quadrature with
// bilinear interpolation (2D) or the two endpoint values (1D).
double mean_boundary_value(const ScalarField& u, const Point& x0, double rho);

struct GeometryOptions {
  double margin = 0.0;  // subdomain margin; 0 = 4h
  std::vector<double> rho_list;
  std::vector<double> delta_list;
  std::size_t max_samples = 128;
  std::uint64_t seed = 1;
};

GeometryReport measure_geometry(const ScalarField& u, double eps,
                                const StencilOperator& op,
                                const GeometryOptions& opts);

}  // namespace inflap
