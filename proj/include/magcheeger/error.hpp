#ifndef MAGCHEEGER_ERROR_HPP
#define MAGCHEEGER_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace magcheeger {

/// Base class for all library failures that carry a process exit code.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int exit_code)
      : std::runtime_error(what), exit_code_(exit_code) {}

  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message, 2), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An exhaustive routine would exceed its enumeration cap.
class CapExceeded : public Error {
 public:
  explicit CapExceeded(const std::string& what) : Error(what, 3) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& what) : Error(what, 4) {}
};

}  // namespace magcheeger

#endif  // MAGCHEEGER_ERROR_HPP
