#pragma once

#include <iosfwd>

namespace kme::cli {

/// Runs the `kme` command line. Returns the process exit code:
/// 0 success, 2 input error (including usage errors), 3 numeric-integrity error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kme::cli
