#pragma once

#include "varfrac_cli/config.hpp"

#include <string>

namespace varfrac_cli {

/// Executes the configured task and writes its outputs under out_dir.
/// Returns the process exit code: 0 success, 3 solver non-convergence,
/// 4 inequality-suite violation. Schema problems throw ConfigError (the
/// CLI maps them to exit 2 before any output file exists).
int run_task(const RunConfig& cfg, const std::string& out_dir, int threads);

} // namespace varfrac_cli
