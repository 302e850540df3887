#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "conslaw/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Conservation-law solver for signalized roads, with certificates"};
  app.set_version_flag("--version", "conslaw 0.1.0");

  std::string config_path;
  std::string mode_override;
  std::string out_override;
  std::uint64_t seed_override = 0;
  int cells_override = 0;
  double cfl_override = 0.0;

  app.add_option("-c,--config", config_path, "Path to the run configuration")
      ->required();
  auto* mode_opt = app.add_option("-m,--mode", mode_override,
                                  "Override mode: solve, certify, sweep or "
                                  "gamma-check");
  auto* out_opt = app.add_option("-o,--out", out_override,
                                 "Override the output directory");
  auto* seed_opt = app.add_option("--seed", seed_override,
                                  "Override the random seed");
  auto* cells_opt = app.add_option("--cells", cells_override,
                                   "Override the cell count");
  auto* cfl_opt = app.add_option("--cfl", cfl_override,
                                 "Override the Courant number");

  CLI11_PARSE(app, argc, argv);

  conslaw::RunConfig config;
  try {
    config = conslaw::parse_config(config_path);
    if (mode_opt->count()) {
      const std::string text = "mode = " + mode_override + "\n";
      config.mode = conslaw::parse_config_text(text).mode;
    }
    if (out_opt->count()) config.out_dir = out_override;
    if (seed_opt->count()) config.seed = seed_override;
    if (cells_opt->count()) {
      if (cells_override < 4) throw conslaw::ConfigError("--cells must be >= 4");
      config.cells = cells_override;
    }
    if (cfl_opt->count()) {
      if (!(cfl_override > 0.0) || cfl_override > 1.0)
        throw conslaw::ConfigError("--cfl must lie in (0, 1]");
      config.cfl = cfl_override;
    }
    conslaw::validate_feasibility(config);
  } catch (const conslaw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const conslaw::RunResult result = conslaw::run(config);
  if (!result.error.empty())
    std::cerr << "run failed (" << result.exit_code << "): " << result.error
              << "\n";
  else
    for (const std::string& name : result.artifacts)
      std::cout << config.out_dir << "/" << name << "\n";
  return result.exit_code;
}
