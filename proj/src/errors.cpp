#include "beliefreg/errors.hpp"

namespace beliefreg {

std::string Diagnostic::to_string() const {
  if (pos.line <= 0) return message;
  return std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  if (diagnostics.empty()) return "parse error";
  std::string out = diagnostics.front().to_string();
  if (diagnostics.size() > 1) {
    out += " (and " + std::to_string(diagnostics.size() - 1) + " more)";
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace beliefreg
