#pragma once

#include <iosfwd>

namespace aplab::cli {

/// Parses argv, runs the subcommand and writes the artifact.
/// Exit codes: 0 success, 2 input or usage error, 3 invariant failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace aplab::cli
