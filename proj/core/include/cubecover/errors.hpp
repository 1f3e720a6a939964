#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cubecover {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A query point does not have the dimension of the design it is checked against.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Explicit enumeration of a design would exceed the configured point cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace cubecover
