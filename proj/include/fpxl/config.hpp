#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "fpxl/presets.hpp"
#include "fpxl/solver.hpp"

namespace fpxl {

struct SweepSpec {
  double from = 0.0;
  double to = 1.0;
  int count = 2;
};

struct DegreeSpec {
  std::string map = "identity";
  std::map<std::string, double> params;
  int dim = 1;
  std::array<double, 2> lo{-1.0, -1.0};
  std::array<double, 2> hi{1.0, 1.0};
  std::array<double, 2> target{0.0, 0.0};
  int boundaryResolution = 128;
};

/// Fully resolved run description. Serialized verbatim into manifest.json;
/// a manifest therefore reproduces its run.
struct RunConfig {
  Box domain;
  double h = 1.0 / 16;
  double s = 0.5;
  ExponentSpec p;
  ExponentSpec r{"constant", {{"value", 1.5}}};
  double lambda = 0.0;
  std::optional<SweepSpec> sweep;
  SolverConfig solver;
  DegreeSpec degree;
  std::string function = "bump";  // norms subcommand input
  int verifySamples = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = auto; resolved before the manifest is written
  std::string out = "out";
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

/// Load a config file; a manifest (object with a "config" key) is unwrapped,
/// so re-running from a manifest reproduces the run.
RunConfig load_config(const std::string& path);

/// Environment overrides: FPXL_SEED, FPXL_THREADS, FPXL_OUT, FPXL_STRATEGY.
void apply_env_overrides(RunConfig& cfg);

/// Build the problem instance the config describes (validates everything).
ProblemData build_problem(const RunConfig& cfg);

}  // namespace fpxl
