#pragma once

#include <cstdint>
#include <string>

namespace inflap {

struct CliOptions {
  std::string subcommand;  // solve, continuation, geometry, barrier-check,
                           // oned, selftest
  std::string config_path;
  std::string out_dir;  // overrides output.dir when non-empty
  std::uint64_t seed = 1;
  bool seed_set = false;
};

// Exit code: 0 ok, 1 a verified property failed, 2 configuration problems.
int run_command(const CliOptions& opts);

}  // namespace inflap
