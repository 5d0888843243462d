#pragma once

#include <stdexcept>
#include <string>

namespace iprox {

/// Input vector has the wrong length for the object it is used with.
struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A parameter is outside the range where the operation is defined.
struct ConstraintError : std::domain_error {
  using std::domain_error::domain_error;
};

/// The requested object has no closed form for this penalty.
struct NoClosedForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A composite contraction factor is >= 1 where a contraction is required.
struct NoContraction : std::domain_error {
  using std::domain_error::domain_error;
};

/// An iteration produced a non-finite or exploding iterate.
struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what);
void require_dim(long got, long expected, const char* where);

}  // namespace iprox
