#pragma once

#include <stdexcept>
#include <string>

namespace tensorfun {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shapes that do not conform (inner dimensions, depths, block heights).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A tensor eigendecomposition or eigenvalue computation failed.
class DecompositionError : public Error {
public:
    using Error::Error;
};

/// A scalar function could not be evaluated on a matrix (undefined on the
/// spectrum, non-finite output, series failure).
class FunctionError : public Error {
public:
    using Error::Error;
};

/// A result that should be real carries a non-negligible imaginary part.
class RealCastError : public Error {
public:
    using Error::Error;
};

/// Input data violating a documented invariant (adjacency tensors, files,
/// configuration values).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// The block Arnoldi process produced a rank-deficient block.
class BreakdownError : public Error {
public:
    BreakdownError(const std::string& what, int step)
        : Error(what), step_(step) {}

    /// 1-based Arnoldi step whose normalization failed; 0 means the
    /// starting block itself.
    int step() const noexcept { return step_; }

private:
    int step_;
};

}  // namespace tensorfun
