#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace screenref {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a domain invariant (bad box, out-of-range ground truth, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

/// A resolver could not be reached or returned an unusable response.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// An evaluation run failed as a whole (e.g. too many transport failures).
class RunError : public Error {
 public:
  using Error::Error;
};

}  // namespace screenref
