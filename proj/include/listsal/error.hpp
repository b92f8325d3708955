#pragma once

#include <stdexcept>
#include <string>

namespace listsal {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated precondition or malformed input (CLI exit code 2).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// File could not be read, written or decoded (CLI exit code 3).
class IoError : public Error {
public:
    using Error::Error;
};

/// An iterative solver ran out of iterations (CLI exit code 4).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace listsal
