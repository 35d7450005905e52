#pragma once

#include <stdexcept>
#include <string>

namespace dimred {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration: syntax, unknown or missing keys, wrong value types.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, int line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// Well-formed input that violates a documented constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside the region where a quantity is defined
// (degenerate radius, query outside a tabulated range, non-finite argument).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical procedure could not deliver a result meeting its contract.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace dimred
