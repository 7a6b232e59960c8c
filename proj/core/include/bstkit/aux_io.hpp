#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bstkit {

// Parsed `.aux` contents. Only the five commands shared by the LaTeX and
// BibTeX sides are interpreted; everything else is kept in `passthrough`.
struct AuxFile {
  std::vector<std::string> citations;  // file order, duplicates kept
  std::optional<std::string> style;
  std::vector<std::string> data;
  std::vector<std::pair<std::string, std::string>> bibcites;  // insertion order
  std::vector<std::string> passthrough;
  std::vector<std::string> raw_lines;

  const std::string* bibcite(std::string_view key) const;
  // Updates the label in place if the key is already present.
  void set_bibcite(std::string key, std::string label);

  // raw_lines is a record of the input, not part of the value.
  friend bool operator==(const AuxFile& a, const AuxFile& b) {
    return a.citations == b.citations && a.style == b.style &&
           a.data == b.data && a.bibcites == b.bibcites &&
           a.passthrough == b.passthrough;
  }
};

// Throws ParseError on a recognized command with unbalanced braces.
AuxFile parse_aux(std::string_view text);

std::string write_aux(const AuxFile& aux);

std::vector<std::string> unique_in_order(std::span<const std::string> keys);

inline std::vector<std::string> unique_citation_order(const AuxFile& aux) {
  return unique_in_order(aux.citations);
}

// Compares bibcite maps ignoring order.
bool same_bibcites(const AuxFile& a, const AuxFile& b);

}  // namespace bstkit
