#pragma once

#include "json_writer.hpp"

#include <string>
#include <vector>

namespace aplab::cli {

struct VerifyRun {
    json results;  // {"checks": [...]}
    json summary;  // pass / fail counts
    std::string matrix;
    std::vector<std::string> failures;
};

/// Desk-scale oracle and invariant suite. `only` selects a group or "all";
/// corrupt_lambda perturbs the weights handed to the library (negative control).
VerifyRun run_verify(const std::string& only, bool corrupt_lambda);

/// Group names in run order.
const std::vector<std::string>& verify_groups();

} // namespace aplab::cli
