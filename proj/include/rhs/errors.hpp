#pragma once

#include <stdexcept>
#include <string>

namespace rhs {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input (bad vertex index, bad probability, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Problem exceeds the fixed size limits (qubits, hyperedges, SDP dimension).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Numerical routine failed to meet its contract.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Invalid sweep / CLI configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace rhs
