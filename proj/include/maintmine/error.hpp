#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace maintmine {

// Base for every error the library throws. The CLI maps DataError to exit
// code 2 and UsageError to exit code 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
public:
  using Error::Error;
};

class DataError : public Error {
public:
  using Error::Error;
};

// Malformed input with a known 1-based line number.
class ParseError : public DataError {
public:
  ParseError(std::size_t line, const std::string &what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace maintmine
