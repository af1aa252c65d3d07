// run.hpp - command-line entry points

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phononcool/cli/config.hpp"

namespace phononcool::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

// Runs a resolved configuration and writes its output file (or `out` when no
// path is set). Throws ConfigError or phononcool::Error.
void run(const RunConfig& config, std::ostream& out, std::ostream& log);

// Full command line: subcommand, flags, exit-code mapping. argv[0] is ignored.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace phononcool::cli
