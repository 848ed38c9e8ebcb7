#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "solitonlab.h"

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for self-similar Curve Shortening solitons"};
  std::string config;
  std::string out = ".";
  bool strict = false;
  uint64_t seed = 0;
  int threads = 1;
  app.add_option("--config", config, "Scenario configuration (JSON)")->required();
  app.add_option("--out", out, "Output directory");
  app.add_flag("--strict", strict, "Fail on report-only findings too");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized seed grids (overrides the config)");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(sl_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  sl_scenario_options opts;
  sl_scenario_options_default(&opts);
  opts.out_dir = out.c_str();
  opts.strict = strict ? 1 : 0;
  opts.has_seed = seed_opt->count() > 0 ? 1 : 0;
  opts.seed = seed;
  opts.threads = threads;

  int exit_code = 2;
  if (sl_scenario_run(config.c_str(), &opts, &exit_code) != SL_OK) {
    std::fprintf(stderr, "error: %s\n", sl_last_error());
    return 2;
  }
  std::fprintf(exit_code == 0 ? stdout : stderr, "%s\n", sl_scenario_message());
  return exit_code;
}
