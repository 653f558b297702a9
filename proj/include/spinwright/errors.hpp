#pragma once

#include <stdexcept>
#include <string>

namespace spinwright {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input data: bad OBJ syntax, non-manifold connectivity,
/// dimension mismatches, out-of-range parameters.
struct InputError : Error {
    using Error::Error;
};

/// Numerical failure: eigensolver non-convergence, singular factorization.
struct SolveError : Error {
    SolveError(const std::string& msg, double last_residual_)
        : Error(msg), last_residual(last_residual_) {}
    double last_residual = 0.0;
};

/// Two meshes fail a geometric compatibility precondition.
struct GeometryError : Error {
    using Error::Error;
};

}  // namespace spinwright
