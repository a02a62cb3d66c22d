#include "inflap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace inflap {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs a number, got '" + v +
                      "'");
  }
  if (pos != v.size()) {
    throw ConfigError("config: key '" + key + "' has trailing characters in '" +
                      v + "'");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' needs an integer, got '" + v +
                      "'");
  }
  if (pos != v.size()) {
    throw ConfigError("config: key '" + key + "' has trailing characters in '" +
                      v + "'");
  }
  return out;
}

}  // namespace

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys = {
      "problem.dim",
      "problem.lo.x",
      "problem.lo.y",
      "problem.hi.x",
      "problem.hi.y",
      "grid.n",
      "problem.boundary.kind",
      "problem.boundary.c0",
      "problem.boundary.c1",
      "problem.rhs.kind",
      "problem.rhs.value",
      "operator.width",
      "operator.gradient_floor",
      "reaction.eps",
      "reaction.beta",
      "reaction.beta_scale",
      "reaction.g.kind",
      "reaction.g.c0",
      "reaction.g.c1",
      "reaction.band.a",
      "reaction.band.b",
      "reaction.envelope_b",
      "reaction.envelope_c",
      "solver.tol",
      "solver.max_iter",
      "solver.gamma",
      "solver.momentum",
      "solver.init",
      "schedule.eps0",
      "schedule.factor",
      "schedule.count",
      "continuation.c1",
      "continuation.stability_factor",
      "geometry.margin",
      "geometry.max_samples",
      "geometry.rho",
      "geometry.delta",
      "oned.x_lo",
      "oned.x_hi",
      "oned.u_left",
      "oned.u_right",
      "oned.step",
      "oned.shoot_max",
      "oned.mismatch_tol",
      "oned.threshold",
      "barrier.a",
      "barrier.b",
      "barrier.a0",
      "barrier.alpha",
      "barrier.l",
      "barrier.kappa0",
      "barrier.eps",
      "barrier.eta",
      "input.field",
      "output.dir",
      "seed",
  };
  return keys;
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  const auto& known = known_keys();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": expected key = value, got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": empty key");
    }
    if (value.empty()) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": empty value for key '" + key + "'");
    }
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": unknown key '" + key + "'");
    }
    if (cfg.kv_.count(key)) {
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "'");
    }
    cfg.kv_[key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               std::string fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : to_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return static_cast<int>(to_integer(key, it->second));
}

std::size_t Config::get_size(const std::string& key,
                             std::size_t fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  const long long v = to_integer(key, it->second);
  if (v < 0) throw ConfigError("config: key '" + key + "' must be >= 0");
  return static_cast<std::size_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError("config: key '" + key + "' needs true/false, got '" +
                    it->second + "'");
}

std::vector<double> Config::get_double_list(
    const std::string& key, std::vector<double> fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream in(it->second);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) {
      throw ConfigError("config: key '" + key + "' has an empty list entry");
    }
    out.push_back(to_double(key, t));
  }
  if (out.empty()) {
    throw ConfigError("config: key '" + key + "' needs a non-empty list");
  }
  return out;
}

Grid build_grid(const Config& cfg) {
  const int dim = cfg.get_int("problem.dim", 2);
  const Point lo{cfg.get_double("problem.lo.x", -1.0),
                 cfg.get_double("problem.lo.y", -1.0)};
  const Point hi{cfg.get_double("problem.hi.x", 1.0),
                 cfg.get_double("problem.hi.y", 1.0)};
  const int n = cfg.get_int("grid.n", 65);
  try {
    return Grid::build(dim, lo, hi, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: grid: ") + e.what());
  }
}

ScalarField build_boundary(const Config& cfg, const Grid& g) {
  const std::string kind = cfg.get_string("problem.boundary.kind", "const");
  const double c0 = cfg.get_double("problem.boundary.c0", 1.0);
  const double c1 = cfg.get_double("problem.boundary.c1", 0.0);
  ScalarField phi(g);
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const Point x = g.coords(k);
    double v = 0.0;
    if (kind == "const") {
      v = c0;
    } else if (kind == "affine") {
      v = c0 + c1 * (x[0] + (g.dim() == 2 ? x[1] : 0.0));
    } else if (kind == "norm43") {
      const double r = g.dim() == 2 ? std::hypot(x[0], x[1]) : std::abs(x[0]);
      v = c0 * std::pow(r, 4.0 / 3.0);
    } else if (kind == "aronsson") {
      const auto p43 = [](double t) {
        return t >= 0.0 ? std::pow(t, 4.0 / 3.0) : -std::pow(-t, 4.0 / 3.0);
      };
      v = c0 * (p43(x[0]) - (g.dim() == 2 ? p43(x[1]) : 0.0));
    } else {
      throw ConfigError("config: problem.boundary.kind '" + kind +
                        "' is not one of const, affine, norm43, aronsson");
    }
    phi[k] = v;
  }
  return phi;
}

StencilOperator build_operator(const Config& cfg) {
  const int width = cfg.get_int("operator.width", 2);
  const double floor = cfg.get_double("operator.gradient_floor", 1e-8);
  try {
    return StencilOperator(width, floor);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: operator: ") + e.what());
  }
}

ReactionTerm build_reaction(const Config& cfg, const Grid& g) {
  ReactionTerm rt;
  rt.eps = cfg.get_double("reaction.eps", 0.1);
  if (rt.eps <= 0.0) throw ConfigError("config: reaction.eps must be > 0");
  const std::string beta = cfg.get_string("reaction.beta", "bump6");
  const double scale = cfg.get_double("reaction.beta_scale", 1.0);
  try {
    rt.beta = BumpProfile::parse(beta, scale);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: reaction.beta: ") + e.what());
  }
  const std::string gk = cfg.get_string("reaction.g.kind", "const");
  if (gk == "const") {
    rt.g.kind = NoiseTerm::Kind::Constant;
  } else if (gk == "affine_x") {
    rt.g.kind = NoiseTerm::Kind::AffineX;
  } else {
    throw ConfigError("config: reaction.g.kind '" + gk +
                      "' is not one of const, affine_x");
  }
  rt.g.c0 = cfg.get_double("reaction.g.c0", 0.0);
  rt.g.c1 = cfg.get_double("reaction.g.c1", 0.0);
  rt.g.x_lo = g.lo()[0];
  rt.g.x_hi = g.hi()[0];
  rt.band_a = cfg.get_double("reaction.band.a", 0.25);
  rt.band_b = cfg.get_double("reaction.band.b", 0.75);
  rt.envelope_B =
      cfg.get_double("reaction.envelope_b", rt.beta.max_value() * 1.0001);
  rt.envelope_C = cfg.get_double(
      "reaction.envelope_c",
      std::max(std::abs(rt.g.c0) + std::abs(rt.g.c1), 1e-12));
  return rt;
}

SolverOptions build_solver_options(const Config& cfg) {
  SolverOptions opts;
  opts.tol = cfg.get_double("solver.tol", 0.0);
  opts.max_iter = cfg.get_size("solver.max_iter", opts.max_iter);
  opts.gamma = cfg.get_double("solver.gamma", opts.gamma);
  if (opts.gamma <= 0.0 || opts.gamma >= 0.5) {
    throw ConfigError("config: solver.gamma must lie in (0, 0.5)");
  }
  opts.momentum = cfg.get_double("solver.momentum", opts.momentum);
  if (opts.momentum < 0.0 || opts.momentum >= 1.0) {
    throw ConfigError("config: solver.momentum must lie in [0, 1)");
  }
  const std::string init = cfg.get_string("solver.init", "zero");
  try {
    opts.init = parse_init_kind(init);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: solver.init: ") + e.what());
  }
  return opts;
}

Rhs build_rhs(const Config& cfg, const Grid& g) {
  const std::string kind = cfg.get_string("problem.rhs.kind", "reaction");
  if (kind == "zero") return RhsZero{};
  if (kind == "const") {
    return RhsConst{cfg.get_double("problem.rhs.value", 0.0)};
  }
  if (kind == "reaction") return RhsReaction{build_reaction(cfg, g)};
  throw ConfigError("config: problem.rhs.kind '" + kind +
                    "' is not one of zero, const, reaction");
}

DirichletProblem build_problem(const Config& cfg) {
  const Grid g = build_grid(cfg);
  return DirichletProblem(g, build_boundary(cfg, g), build_rhs(cfg, g),
                          build_operator(cfg));
}

EpsilonSchedule build_schedule(const Config& cfg) {
  EpsilonSchedule s;
  s.eps0 = cfg.get_double("schedule.eps0", s.eps0);
  s.factor = cfg.get_double("schedule.factor", s.factor);
  s.count = cfg.get_int("schedule.count", s.count);
  if (s.eps0 <= 0.0 || s.factor <= 0.0 || s.factor >= 1.0 || s.count < 1) {
    throw ConfigError(
        "config: schedule needs eps0 > 0, factor in (0,1), count >= 1");
  }
  return s;
}

GeometryOptions build_geometry_options(const Config& cfg, const Grid& g,
                                        std::uint64_t seed) {
  GeometryOptions opts;
  opts.margin = cfg.get_double("geometry.margin", 0.0);
  opts.max_samples = cfg.get_size("geometry.max_samples", opts.max_samples);
  opts.rho_list = cfg.get_double_list("geometry.rho", {});
  opts.delta_list = cfg.get_double_list("geometry.delta", {});
  opts.seed = seed;
  (void)g;
  return opts;
}

ContinuationOptions build_continuation_options(const Config& cfg,
                                               const Grid& g,
                                               std::uint64_t seed) {
  ContinuationOptions opts;
  opts.solver = build_solver_options(cfg);
  opts.geometry = build_geometry_options(cfg, g, seed);
  opts.C1 = cfg.get_double("continuation.c1", opts.C1);
  opts.stability_factor =
      cfg.get_double("continuation.stability_factor", opts.stability_factor);
  if (opts.C1 <= 0.0) throw ConfigError("config: continuation.c1 must be > 0");
  return opts;
}

BarrierParams build_barrier(const Config& cfg) {
  BarrierParams bp;
  bp.a = cfg.get_double("barrier.a", 0.25);
  bp.b = cfg.get_double("barrier.b", 0.75);
  bp.A0 = cfg.get_double("barrier.a0", 0.01);
  bp.alpha = cfg.get_double("barrier.alpha", 2.0);
  bp.kappa0 = cfg.get_double("barrier.kappa0", 0.0);
  const double L0 = std::sqrt((bp.b - bp.a) / bp.A0);
  bp.L = cfg.get_double("barrier.l", L0);
  try {
    return BarrierParams::make(bp.a, bp.b, bp.A0, bp.alpha, bp.L, bp.kappa0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: barrier: ") + e.what());
  }
}

OneDProblem build_oned(const Config& cfg) {
  OneDProblem p;
  const Grid dummy = Grid::build(1, {cfg.get_double("oned.x_lo", -1.0), 0.0},
                                 {cfg.get_double("oned.x_hi", 1.0), 0.0}, 3);
  p.rt = build_reaction(cfg, dummy);
  p.x_lo = dummy.lo()[0];
  p.x_hi = dummy.hi()[0];
  p.u_left = cfg.get_double("oned.u_left", 0.5);
  p.u_right = cfg.get_double("oned.u_right", 0.5);
  p.step = cfg.get_double("oned.step", 1e-4);
  p.shoot_max = cfg.get_double("oned.shoot_max", 10.0);
  p.mismatch_tol = cfg.get_double("oned.mismatch_tol", 1e-8);
  if (p.x_lo >= p.x_hi) throw ConfigError("config: oned.x_lo < oned.x_hi");
  if (p.step <= 0.0) throw ConfigError("config: oned.step must be > 0");
  return p;
}

}  // namespace inflap
