#pragma once

#include <string>

#include "config.hpp"

namespace mbdiff_cli {

// Process exit codes shared with the integration tests.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitStabilityBreakdown = 3;
inline constexpr int kExitInvariantViolation = 4;

/// Runs the configured command and writes its outputs under cfg.output_dir.
/// Returns one of the exit codes above.
int run_command(const RunConfig& cfg, bool quiet);

}  // namespace mbdiff_cli
