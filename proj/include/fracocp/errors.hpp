#pragma once

#include <stdexcept>
#include <string>

namespace fracocp {

/// Bad user input: nonpositive sizes, alpha outside (0,1], empty box, ...
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two grids that were expected to be nested are not.
class NestingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero pivot in a tridiagonal or dense elimination.
class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A user-supplied function returned a non-finite value.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, int iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace fracocp
