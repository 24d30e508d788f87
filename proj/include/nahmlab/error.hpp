#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nahmlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Asked for coefficients the operands do not determine.
class TruncationError : public Error {
 public:
  using Error::Error;
};

// Bad parameters: non-positive modulus, singular matrix, zero divisor...
class DomainError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace nahmlab
