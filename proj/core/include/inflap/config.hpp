#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "inflap/barrier.hpp"
#include "inflap/continuation.hpp"
#include "inflap/one_dim.hpp"
#include "inflap/solver.hpp"

namespace inflap {

// Raised for malformed files, unknown keys and bad values. The CLI maps it
// to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plain text, one dotted.key = value per line, '#' comments. Keys outside
// the registry are rejected at parse time.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<string>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::size_t get_size(const std::string& key, std::size_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;

  const std::map<std::string, std::string>& entries() const { return kv_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> kv_;
};

// Builders from the registered sections; every getter uses the documented
// default when the key is absent.
Grid build_grid(const Config& cfg);
ScalarField build_boundary(const Config& cfg, const Grid& g);
StencilOperator build_operator(const Config& cfg);
ReactionTerm build_reaction(const Config& cfg, const Grid& g);
SolverOptions build_solver_options(const Config& cfg);
Rhs build_rhs(const Config& cfg, const Grid& g);
DirichletProblem build_problem(const Config& cfg);
EpsilonSchedule build_schedule(const Config& cfg);
GeometryOptions build_geometry_options(const Config& cfg, const Grid& g,
                                        std::uint64_t seed);
ContinuationOptions build_continuation_options(const Config& cfg,
                                               const Grid& g,
                                               std::uint64_t seed);
BarrierParams build_barrier(const Config& cfg);
OneDProblem build_oned(const Config& cfg);

}  // namespace inflap
