#pragma once

#include <stdexcept>

namespace sisdde {

// Thrown when an operation's model-level precondition fails, e.g. asking for
// endemic-equilibrium quantities while R0 <= 1.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a computation breaks down numerically (NaN/overflow during
// integration, violated stability bound, singular linear solve).
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sisdde
