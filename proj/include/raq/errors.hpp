#pragma once

#include <stdexcept>
#include <string>

namespace raq {

// Caller supplied something malformed or outside a procedure's domain.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input file problem, carries the 1-based line when known (0 otherwise).
class ParseError : public UsageError {
 public:
  ParseError(const std::string& message, int line = 0)
      : UsageError(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        detail_(message),
        line_(line) {}
  // Same error attributed to a file: "path:line: message".
  ParseError(const std::string& path, const ParseError& inner)
      : UsageError(path + ":" + (inner.line() > 0 ? std::to_string(inner.line()) + ":" : "") + " " + inner.detail()),
        detail_(inner.detail()),
        line_(inner.line()) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
  int line_;
};

// A configurable cap (frontier size, search depth, solver nodes) was hit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace raq
