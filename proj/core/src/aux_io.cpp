#include "bstkit/aux_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>

#include "bstkit/diagnostics.hpp"
#include "bstkit/text.hpp"

namespace bstkit {

const std::string* AuxFile::bibcite(std::string_view key) const {
  for (const auto& [k, label] : bibcites) {
    if (k == key) return &label;
  }
  return nullptr;
}

void AuxFile::set_bibcite(std::string key, std::string label) {
  for (auto& [k, l] : bibcites) {
    if (k == key) {
      l = std::move(label);
      return;
    }
  }
  bibcites.emplace_back(std::move(key), std::move(label));
}

namespace {

// Reads a `{...}` group starting at `pos`, which must be '{'.
std::string read_group(std::string_view line, std::size_t& pos, int line_no,
                       std::string_view command) {
  if (pos >= line.size() || line[pos] != '{') {
    throw ParseError("missing argument to \\" + std::string(command), line_no);
  }
  const std::size_t start = ++pos;
  int depth = 1;
  while (pos < line.size()) {
    const char c = line[pos++];
    if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return std::string(line.substr(start, pos - 1 - start));
  }
  throw ParseError("unbalanced braces in \\" + std::string(command), line_no);
}

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view piece = text::trim(s.substr(start, comma - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = comma + 1;
  }
  return out;
}

bool starts_with_command(std::string_view line, std::string_view name) {
  if (!line.starts_with(name)) return false;
  // \citation must not match \citationfoo
  return line.size() == name.size() || !std::isalpha(static_cast<unsigned char>(line[name.size()]));
}

}  // namespace

AuxFile parse_aux(std::string_view text) {
  AuxFile aux;
  aux.raw_lines = text::split_lines(text);
  int line_no = 0;
  for (const std::string& raw : aux.raw_lines) {
    ++line_no;
    std::string_view line = text::trim(raw);
    if (line.empty()) continue;
    std::size_t pos = 0;
    if (starts_with_command(line, "\\relax")) {
      continue;
    } else if (starts_with_command(line, "\\citation")) {
      pos = 9;
      for (auto& key : split_commas(read_group(line, pos, line_no, "citation"))) {
        aux.citations.push_back(std::move(key));
      }
    } else if (starts_with_command(line, "\\bibstyle")) {
      pos = 9;
      aux.style = std::string(text::trim(read_group(line, pos, line_no, "bibstyle")));
    } else if (starts_with_command(line, "\\bibdata")) {
      pos = 8;
      for (auto& name : split_commas(read_group(line, pos, line_no, "bibdata"))) {
        aux.data.push_back(std::move(name));
      }
    } else if (starts_with_command(line, "\\bibcite")) {
      pos = 8;
      std::string key = read_group(line, pos, line_no, "bibcite");
      std::string label = read_group(line, pos, line_no, "bibcite");
      if (label.empty()) throw ParseError("empty label in \\bibcite{" + key + "}", line_no);
      aux.set_bibcite(std::move(key), std::move(label));
    } else {
      aux.passthrough.emplace_back(raw);
    }
  }
  return aux;
}

std::string write_aux(const AuxFile& aux) {
  std::string out = "\\relax\n";
  for (const auto& key : aux.citations) out += "\\citation{" + key + "}\n";
  if (aux.style) out += "\\bibstyle{" + *aux.style + "}\n";
  if (!aux.data.empty()) {
    out += "\\bibdata{";
    for (std::size_t i = 0; i < aux.data.size(); ++i) {
      if (i > 0) out += ',';
      out += aux.data[i];
    }
    out += "}\n";
  }
  for (const auto& [key, label] : aux.bibcites) out += "\\bibcite{" + key + "}{" + label + "}\n";
  for (const auto& line : aux.passthrough) out += line + "\n";
  return out;
}

std::vector<std::string> unique_in_order(std::span<const std::string> keys) {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const auto& key : keys) {
    if (seen.insert(key).second) out.push_back(key);
  }
  return out;
}

bool same_bibcites(const AuxFile& a, const AuxFile& b) {
  std::map<std::string_view, std::string_view> ma(a.bibcites.begin(), a.bibcites.end());
  std::map<std::string_view, std::string_view> mb(b.bibcites.begin(), b.bibcites.end());
  return ma == mb;
}

}  // namespace bstkit
