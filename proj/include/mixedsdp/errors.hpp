#pragma once

#include <stdexcept>
#include <string>

namespace mixedsdp {

// Base of every error raised by the library. The CLI maps the subclasses
// onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: lengths, ranges, sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// An instance is too large for a brute-force routine.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ConditioningError : public SolverError {
 public:
  using SolverError::SolverError;
};

class CertificationError : public SolverError {
 public:
  using SolverError::SolverError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VerificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mixedsdp
