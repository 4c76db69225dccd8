#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace gf2 {

/// Base class for every error raised by the library. `module()` names the
/// component that raised it so front ends can report the origin.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(what), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::string module, int line, const std::string& what)
      : Error(std::move(module),
              line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Input is well-formed but violates an operation's precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Truncated Gaussian elimination found no pivot with constant term 1.
class NoInvertiblePivot : public Error {
 public:
  explicit NoInvertiblePivot(const std::string& what)
      : Error("decomposition", what) {}
};

/// A guarded exhaustive computation was asked to go beyond its cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

}  // namespace gf2
