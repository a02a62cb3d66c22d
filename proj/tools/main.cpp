#include <CLI11.hpp>

#include "inflap/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"singular perturbation laboratory for the infinity Laplacian"};
  app.require_subcommand(1);

  inflap::CliOptions opts;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed, "sampling seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
  };

  for (const char* name : {"solve", "continuation", "geometry",
                           "barrier-check", "oned", "selftest"}) {
    add_common(app.add_subcommand(name));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  opts.subcommand = app.get_subcommands().front()->get_name();
  return inflap::run_command(opts);
}
