#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spdeconv {

/// Command-line front end. Subcommands: simulate, deconvolve, sweep,
/// metrics, replay. Returns the process exit code:
///   0 success, 2 usage error, 3 data error, 4 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

} // namespace spdeconv
