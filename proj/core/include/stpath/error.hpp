#pragma once

#include <stdexcept>
#include <string>

namespace stpath {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unsupported input (documents, parameters, preconditions).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A structural guarantee of the tree-exchange machinery did not hold.
/// Raised only when an input violates a precondition or on an internal bug.
class StructureViolation : public Error {
 public:
  using Error::Error;
};

/// A numeric certificate failed its exact check.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

/// Numerical trouble inside the LP core.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace stpath
