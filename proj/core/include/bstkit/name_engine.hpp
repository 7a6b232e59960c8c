#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bstkit {

class NameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NameParts {
  std::vector<std::string> first;
  std::vector<std::string> von;
  std::vector<std::string> last;
  std::vector<std::string> jr;

  friend bool operator==(const NameParts&, const NameParts&) = default;
};

enum class NamePart { first, von, last, jr };

struct TemplatePiece {
  NamePart part;
  bool full;            // "ll" versus "l"
  std::string suffix;   // literal text after the letters, e.g. "." in {l.}

  friend bool operator==(const TemplatePiece&, const TemplatePiece&) = default;
};

struct NameTemplate {
  std::vector<TemplatePiece> pieces;
};

// Splits an author list on the lowercase word "and" at brace depth 0.
std::vector<std::string> split_names(std::string_view list);

// Whitespace-delimited words at brace depth 0, commas removed. The tokens
// of parse_name's four parts are a permutation-free partition of this.
std::vector<std::string> tokenize_name(std::string_view name);

// Form is chosen by the number of depth-0 commas:
//   0: First von Last   1: von Last, First   2: von Last, Jr, First
NameParts parse_name(std::string_view name);

NameTemplate parse_template(std::string_view tmpl);

std::string format_name(const NameParts& parts, const NameTemplate& tmpl);
std::string format_name(std::string_view name, std::string_view tmpl);

// True when the word's first letter (at depth 0) is lowercase. A leading
// brace group counts as uppercase.
bool is_von_word(std::string_view word);

}  // namespace bstkit
