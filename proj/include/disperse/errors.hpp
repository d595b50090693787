#pragma once

#include <stdexcept>
#include <string>

namespace disperse {

/// Bad arguments or configuration supplied by the caller (CLI exit code 2).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Parameter outside the mathematical domain of an operation.
struct DomainError : ArgumentError {
    explicit DomainError(const std::string& what) : ArgumentError(what) {}
};

/// A computation failed numerically: under-resolved grid, non-convergent
/// quadrature, near-singular denominator (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct ResolutionError : NumericalError {
    explicit ResolutionError(const std::string& what) : NumericalError(what) {}
};

struct SingularityError : NumericalError {
    explicit SingularityError(const std::string& what) : NumericalError(what) {}
};

} // namespace disperse
