#pragma once

#include <stdexcept>
#include <string>

namespace uncvol {

/// Input too short or otherwise dimensionally infeasible.
struct SizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A value outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Rank-deficient or otherwise unsolvable linear system.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite values encountered during an iterative computation.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input file.
struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uncvol
