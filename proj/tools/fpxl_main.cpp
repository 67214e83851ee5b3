// Command-line front end: config-driven experiments on the nonlocal
// variable-exponent Dirichlet problem. See README.md for the config grammar.
#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "fpxl/errors.hpp"
#include "fpxl/run.hpp"
#include "fpxl/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fpxl: variable-exponent function-space toolkit and nonlocal p(x)-Laplacian solver"};
  app.set_version_flag("--version", fpxl::kVersion);
  app.require_subcommand(1);

  std::string configPath;
  std::string outOverride;
  std::string strategyOverride;
  std::uint64_t seedOverride = 0;
  bool seedSet = false;

  const std::vector<std::string> commands = {"solve",  "sweep",  "verify",
                                             "norms",  "degree", "continuation"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", configPath, "path to a JSON config (or a manifest.json)")
        ->required();
    sub->add_option("--out", outOverride, "output directory (overrides config)");
    sub->add_option("--strategy", strategyOverride, "solver strategy (overrides config)");
    sub->add_option("--seed", seedOverride, "random seed (overrides config)")
        ->each([&](const std::string&) { seedSet = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    fpxl::RunConfig cfg = fpxl::load_config(configPath);
    if (!outOverride.empty()) cfg.out = outOverride;
    if (!strategyOverride.empty()) cfg.solver.strategy = fpxl::parse_strategy(strategyOverride);
    if (seedSet) cfg.seed = seedOverride;
    const std::string command = app.get_subcommands().front()->get_name();
    return fpxl::run_command(command, std::move(cfg), std::cout);
  } catch (const fpxl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fpxl::kExitValidation;
  }
}
