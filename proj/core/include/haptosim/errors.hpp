#pragma once

#include <stdexcept>
#include <string>

namespace haptosim {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A field contains NaN/Inf where a finite value is required.
struct InvalidState : Error {
    using Error::Error;
};

// A field does not live on the grid an operator was given.
struct GridMismatch : Error {
    using Error::Error;
};

// Bad configuration value or malformed config text.
struct ConfigError : Error {
    using Error::Error;
};

// Conjugate gradient exceeded its iteration cap.
struct LinearSolveFailure : Error {
    using Error::Error;
};

// Initial data violates nonnegativity.
struct InvalidInitialData : Error {
    using Error::Error;
};

// H(y) = y + A1*y^-delta has no attained minimum at delta = 1.
struct DegenerateDelta : Error {
    using Error::Error;
};

// Feasibility search requires mu > 0.
struct InfeasibleParameters : Error {
    using Error::Error;
};

} // namespace haptosim
