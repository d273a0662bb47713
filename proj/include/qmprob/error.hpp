#pragma once

#include <stdexcept>
#include <string>

namespace qmprob {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (bad bounds, counts, orders).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A field does not have one sample per grid point.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A physical admissibility condition failed (normalization, boundary decay, CFL).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given input (e.g. momentum transform in 2D).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message names the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace qmprob
