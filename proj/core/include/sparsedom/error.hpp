#pragma once

#include <stdexcept>
#include <string>

namespace sparsedom {

/// Invalid numeric parameter (exponent out of range, empty collection, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A weight that is not strictly positive where it must be.
class WeightError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Attempt to split a cube whose side is odd or a single cell.
class SubdivisionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Functions, cubes or families living on different domains.
class DomainMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation requested outside the supported dimension or order.
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Kernel evaluated on its singular set.
class SingularityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A documented precondition that the caller is responsible for.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sparsedom
