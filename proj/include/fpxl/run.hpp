#pragma once

#include <iosfwd>
#include <string>

#include "fpxl/config.hpp"

namespace fpxl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitValidation = 3;

/// Execute one subcommand (solve | sweep | verify | norms | degree |
/// continuation): resolves the config, writes manifest.json, report.json and
/// the per-command CSV artifacts under cfg.out, and returns the exit code.
/// Reports carry no timestamps, so identical configs produce byte-identical
/// reports.
int run_command(const std::string& command, RunConfig cfg, std::ostream& log);

}  // namespace fpxl
