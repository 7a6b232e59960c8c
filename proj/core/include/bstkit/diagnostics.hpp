#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bstkit {

enum class Severity { warning, error };

// One message from a parser or the interpreter. `line` is 1-based; 0 means
// the message is not tied to a source position.
struct Diagnostic {
  Severity severity = Severity::error;
  std::string message;
  int line = 0;
  std::string source;
  std::string code;  // machine-readable category, e.g. "undefined-target"

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string to_string(const Diagnostic& d);

bool has_errors(const std::vector<Diagnostic>& diags);
std::size_t count(const std::vector<Diagnostic>& diags, Severity severity);

// Thrown by parsers that have no sensible partial result (aux, tex, names).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace bstkit
