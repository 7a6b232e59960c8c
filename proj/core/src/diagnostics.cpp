#include "bstkit/diagnostics.hpp"

#include <algorithm>

namespace bstkit {

std::string to_string(const Diagnostic& d) {
  std::string out;
  if (!d.source.empty()) {
    out += d.source;
    if (d.line > 0) out += ":" + std::to_string(d.line);
    out += ": ";
  } else if (d.line > 0) {
    out += "line " + std::to_string(d.line) + ": ";
  }
  out += d.severity == Severity::warning ? "warning: " : "error: ";
  out += d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

std::size_t count(const std::vector<Diagnostic>& diags, Severity severity) {
  return static_cast<std::size_t>(std::count_if(
      diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == severity; }));
}

}  // namespace bstkit
