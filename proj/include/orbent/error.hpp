#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace orbent {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed FCIDUMP input. Carries the 1-based line number and the token
/// that triggered the failure.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string token, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what + " (token '" +
              token + "')"),
        line_(line),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::string token_;
};

/// Index outside its admissible range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Vector / basis / matrix dimensions that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed report, label or orbital-map document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace orbent
