#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace screenref::cli {

/// Runs the command line `args` (args[0] is the program name). Regular output
/// goes to `out`, diagnostics to `err`. Returns the process exit status: 0 on
/// success, 1 on an operational failure, 2 on a usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace screenref::cli
