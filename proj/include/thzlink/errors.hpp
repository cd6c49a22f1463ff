#pragma once

#include <stdexcept>
#include <string>

namespace thzlink {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Gamma-function argument landed on a non-positive integer.
struct PoleError : DomainError {
  using DomainError::DomainError;
};

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleOnContour : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// A quantity left its mathematically admissible band by more than the
// tolerated numerical slack (e.g. a CDF value outside [-1e-6, 1+1e-6]).
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// beta == alpha*mu: the residue expansion has a pole collision and no
// asymptotic branch is defined.
struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct EmptyBatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace thzlink
