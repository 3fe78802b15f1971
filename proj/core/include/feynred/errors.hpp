#pragma once

#include <stdexcept>
#include <string>

namespace feynred {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two polynomials built over different variable contexts were combined.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

// A configured size limit was exceeded; the caller should report
// "budget exceeded" rather than a verdict.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Syntax or reference error in a text input; carries the 1-based line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace feynred
