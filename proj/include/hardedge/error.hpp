#pragma once

#include <stdexcept>
#include <string>

namespace hardedge {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A computed quantity lost the accuracy it is guaranteed to have
/// (nonpositive denominator, nonpositive log argument, ...).
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Quadrature or iterative solver failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hardedge
