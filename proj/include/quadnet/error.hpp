#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quadnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different variable tables or coefficient fields.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Input violates an operation precondition (wrong bidegree, bad shape, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Text that does not conform to the polynomial or scenario grammar.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace quadnet
