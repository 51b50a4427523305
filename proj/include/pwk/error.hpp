#pragma once

#include <stdexcept>
#include <string>

namespace pwk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact solver was asked to handle more vertices than its configured cap.
class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, int size, int cap)
      : Error(what + ": " + std::to_string(size) + " vertices exceeds cap " +
              std::to_string(cap)),
        size_(size),
        cap_(cap) {}

  int size() const noexcept { return size_; }
  int cap() const noexcept { return cap_; }

 private:
  int size_;
  int cap_;
};

/// The reduction scheduler exceeded its application budget.
class BoundViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace pwk
