#pragma once

#include <stdexcept>
#include <string>

namespace crlab {

/// Argument outside the region where an evaluator is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A model or field could not be built from the supplied parameters.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input rejected by an operation precondition (excluded parameter pairs etc.).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A k-th root was requested on the cut of its branch window.
class BranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// cos(R + alpha t) vanished on an identity slice.
class SingularSliceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Linear algebra failure (decomposition did not converge, non-finite input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range run configuration. `where` names the field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), field(where) {}
  std::string field;
};

}  // namespace crlab
