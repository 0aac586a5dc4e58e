#include "phm/error.hpp"

namespace phm {

std::string to_string(const Diagnostic& d) {
  return d.path.empty() ? d.message : d.path + ": " + d.message;
}

namespace {

std::string join(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += "; ";
    out += to_string(d);
  }
  return out.empty() ? "validation failed" : out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

ValidationError::ValidationError(std::string path, std::string message)
    : ValidationError(std::vector<Diagnostic>{{std::move(path), std::move(message)}}) {}

SchemaError::SchemaError(std::string pointer, int line, const std::string& message)
    : Error((pointer.empty() ? std::string("<document>") : pointer) + " (line " +
            std::to_string(line) + "): " + message),
      pointer_(std::move(pointer)),
      line_(line),
      message_(message) {}

}  // namespace phm
