// Command-line front end. Kept in the library so tests can drive it
// in-process; tools/main.cpp only forwards argv.
#pragma once

#include <iosfwd>

namespace hokalman {

/// Exit codes: 0 when the requested artifact was fully written, 1 on a
/// runtime failure (I/O, too few samples), 2 on a usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hokalman
