#pragma once

#include <ostream>

namespace rydgate {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;   // usage or configuration error
inline constexpr int kExitPhysics = 2;  // physics or numerical error

/// Entry point of the `rydgate` tool: subcommands run, validate,
/// calibrate and list-experiments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rydgate
