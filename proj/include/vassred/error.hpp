#ifndef VASSRED_ERROR_HPP
#define VASSRED_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vassred {

/// Violated precondition or malformed input to a library operation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or name-resolution failure in program text.  Line and column are
/// 1-based and refer to the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A computation would exceed a configured resource cap (integer size,
/// counter range).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace vassred

#endif  // VASSRED_ERROR_HPP
