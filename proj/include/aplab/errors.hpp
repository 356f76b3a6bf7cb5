#pragma once

#include <stdexcept>
#include <string>

namespace aplab {

// Caller supplied an argument outside an operation's domain.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A block or range too small to carry the requested structure (N = 0 etc).
class degenerate_error : public input_error {
public:
    using input_error::input_error;
};

// An identity or inequality that must hold unconditionally failed.
// Seeing one of these means a bug, not bad input.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Work budget exceeded (factorization limits, memory caps).
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace aplab
