#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace phm {

/// A problem found while checking a model, tree or binding. `path` names the
/// offending element (component path, tree path or document pointer).
struct Diagnostic {
  std::string path;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);

/// Base of every error the engine throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative time,
/// x <= 0 for gamma, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or structure. Carries every diagnostic found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  ValidationError(std::string path, std::string message);

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// A numeric procedure ran out of budget. `partial()` holds the best value
/// reached before giving up.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double partial)
      : Error(what), partial_(partial) {}

  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

/// The system reliability has dropped below the evaluation floor (1e-12).
class SystemFailedError : public Error {
 public:
  using Error::Error;
};

/// Malformed document: syntax error or schema violation at a known location.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, int line, const std::string& message);

  const std::string& pointer() const noexcept { return pointer_; }
  int line() const noexcept { return line_; }
  /// The message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string pointer_;
  int line_;
  std::string message_;
};

}  // namespace phm
