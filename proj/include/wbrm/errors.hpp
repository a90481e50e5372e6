#pragma once

#include <stdexcept>
#include <string>

namespace wbrm {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad arguments or out-of-contract inputs (CLI exit code 2).
struct ValidationError : Error {
    using Error::Error;
};

/// The target energy sits on (or within 1e-12 of) an unperturbed level,
/// so 1/(E - E0_k) is ill-defined (CLI exit code 3).
struct ResonanceError : Error {
    using Error::Error;
};

/// Eigensolver failed to converge.
struct ConvergenceError : Error {
    using Error::Error;
};

/// No admissible interval satisfies the spectral-radius condition.
struct SearchError : Error {
    using Error::Error;
};

struct FitError : Error {
    using Error::Error;
};

struct DegenerateProfileError : Error {
    using Error::Error;
};

}  // namespace wbrm
