#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bstkit/bib_database.hpp"
#include "bstkit/name_engine.hpp"

namespace bstkit::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(BSTKIT_TEST_DATA_DIR) / name;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string read_data(const std::string& name) { return read_text(data_path(name)); }

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Splices `fragment` into `style` right after the READ line.
inline std::string insert_after_read(const std::string& style, const std::string& fragment) {
  const auto pos = style.find("READ\n");
  if (pos == std::string::npos) throw std::runtime_error("style has no READ line");
  std::string out = style;
  out.insert(pos + 5, "\n" + fragment + "\n");
  return out;
}

// Replaces the `FUNCTION {name}...` block (up to the next top-level line
// starting with an uppercase keyword) with `replacement`.
inline std::string replace_function(const std::string& style, const std::string& name,
                                    const std::string& replacement) {
  const std::string head = "FUNCTION {" + name + "}";
  const auto b = style.find(head);
  if (b == std::string::npos) throw std::runtime_error("no function " + name);
  auto e = style.find("\nFUNCTION", b + head.size());
  const auto r = style.find("\nREAD", b + head.size());
  if (r < e) e = r;
  std::string out = style;
  out.replace(b, e - b, replacement);
  return out;
}

// Canonical .bib text for a database; used for parse/serialize round trips.
inline std::string serialize_bib(const Database& db) {
  std::string out;
  for (const Entry& e : db.entries()) {
    out += "@" + e.entry_type + "{" + e.key + ",\n";
    for (const auto& [k, v] : e.fields) out += "  " + k + " = {" + v + "},\n";
    out += "}\n\n";
  }
  return out;
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "bstkit-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// --- random generators -----------------------------------------------------

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline std::string lower_word(Rng& rng, int min_len = 1, int max_len = 6) {
  std::string w;
  const int n = pick(rng, min_len, max_len);
  for (int i = 0; i < n; ++i) w.push_back(static_cast<char>('a' + pick(rng, 0, 25)));
  return w;
}

// Uppercase-initial word: "Ulam", "P.", "Tse-Chung" or "{Van}".
inline std::string upper_word(Rng& rng) {
  std::string w(1, static_cast<char>('A' + pick(rng, 0, 25)));
  switch (pick(rng, 0, 5)) {
    case 0: return w + ".";
    case 1: return w + lower_word(rng) + "-" + static_cast<char>('A' + pick(rng, 0, 25)) + lower_word(rng);
    case 2: return "{" + w + lower_word(rng) + "}";
    default: return w + lower_word(rng);
  }
}

inline std::string von_word(Rng& rng) {
  static const std::vector<std::string> common{"de", "la", "van", "der", "von", "du", "di"};
  return pick(rng, 0, 2) == 0 ? lower_word(rng, 2, 4) : common[pick(rng, 0, 6)];
}

// Name parts with unambiguous von detection: first/last words are
// uppercase-initial, von words lowercase, and a von-less name has a
// single-word last part.
inline NameParts random_parts(Rng& rng, bool with_jr) {
  NameParts p;
  for (int i = pick(rng, 0, 3); i > 0; --i) p.first.push_back(upper_word(rng));
  for (int i = pick(rng, 0, 2); i > 0; --i) p.von.push_back(von_word(rng));
  const int last_words = p.von.empty() ? 1 : pick(rng, 1, 2);
  for (int i = 0; i < last_words; ++i) p.last.push_back(upper_word(rng));
  if (with_jr) p.jr.push_back(pick(rng, 0, 1) ? "Jr." : "III");
  return p;
}

inline std::string join_words(const std::vector<std::string>& w) {
  std::string out;
  for (const auto& s : w) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

inline std::string render_first_von_last(const NameParts& p) {
  std::vector<std::string> all = p.first;
  all.insert(all.end(), p.von.begin(), p.von.end());
  all.insert(all.end(), p.last.begin(), p.last.end());
  return join_words(all);
}

inline std::string render_von_last_first(const NameParts& p) {
  std::vector<std::string> head = p.von;
  head.insert(head.end(), p.last.begin(), p.last.end());
  std::string out = join_words(head);
  if (!p.jr.empty()) out += ", " + join_words(p.jr);
  return out + ", " + join_words(p.first);
}

// --- random .bst programs ----------------------------------------------------

// Emits stack-balanced statements from a small grammar. Entry context
// allows field reads and cite$.
class StyleGenerator {
 public:
  explicit StyleGenerator(Rng& rng) : rng_(rng) {}

  std::string str_expr(bool entry_ctx, int depth) {
    const int choice = pick(rng_, 0, depth > 2 ? 2 : 5);
    switch (choice) {
      case 0: return "\"" + lower_word(rng_) + "\"";
      case 1: return "s";
      case 2: return entry_ctx ? (pick(rng_, 0, 1) ? "author" : "cite$") : "\"x\"";
      case 3: return str_expr(entry_ctx, depth + 1) + " " + str_expr(entry_ctx, depth + 1) + " *";
      case 4: return "\"A. Bee and C. Dee\" #" + std::to_string(pick(rng_, 1, 2)) + " \"{ll}\" format.name$";
      default: return entry_ctx ? "title" : "\"y\"";
    }
  }

  std::string int_expr(bool entry_ctx, int depth) {
    const int choice = pick(rng_, 0, depth > 2 ? 1 : 6);
    switch (choice) {
      case 0: return "#" + std::to_string(pick(rng_, -3, 9));
      case 1: return "n";
      case 2: return int_expr(entry_ctx, depth + 1) + " " + int_expr(entry_ctx, depth + 1) + " +";
      case 3: return int_expr(entry_ctx, depth + 1) + " " + int_expr(entry_ctx, depth + 1) + " -";
      case 4: return str_expr(entry_ctx, depth + 1) + " empty$";
      case 5: return str_expr(entry_ctx, depth + 1) + " num.names$";
      default: return str_expr(entry_ctx, depth + 1) + " " + str_expr(entry_ctx, depth + 1) + " =";
    }
  }

  std::string statement(bool entry_ctx, int depth) {
    const int choice = pick(rng_, 0, depth > 1 ? 4 : 6);
    switch (choice) {
      case 0: return str_expr(entry_ctx, depth) + " write$";
      case 1: return "newline$";
      case 2: return int_expr(entry_ctx, depth) + " 'n :=";
      case 3: return str_expr(entry_ctx, depth) + " 's :=";
      case 4: return "skip$";
      case 5:
        return int_expr(entry_ctx, depth) + " { " + statements(entry_ctx, depth + 1) + " } { " +
               statements(entry_ctx, depth + 1) + " } if$";
      default:
      {
        // One counter per nesting depth so inner loops cannot reset outer ones.
        const std::string i = "i" + std::to_string(depth);
        return "#0 '" + i + " := { " + i + " #" + std::to_string(pick(rng_, 0, 4)) + " < } { " +
               statements(entry_ctx, depth + 1) + " " + i + " #1 + '" + i + " := } while$";
      }
    }
  }

  std::string statements(bool entry_ctx, int depth) {
    std::string out;
    for (int i = pick(rng_, 1, 4); i > 0; --i) {
      if (!out.empty()) out += ' ';
      out += statement(entry_ctx, depth);
    }
    return out;
  }

  // A complete style. With `mutate`, one executed function leaves an
  // extra integer on the stack.
  std::string style(bool mutate) {
    std::string out = "ENTRY {author title}{}{}\nINTEGERS {n i0 i1 i2}\nSTRINGS {s}\n";
    const int exec_count = pick(rng_, 1, 3);
    const int mutated = mutate ? pick(rng_, 0, exec_count) : -1;
    for (int i = 0; i < exec_count; ++i) {
      out += "FUNCTION {f" + std::to_string(i) + "} { " + statements(false, 0) +
             (i == mutated ? " #7" : "") + " }\n";
    }
    out += "FUNCTION {per.entry} { " + statements(true, 0) + (mutated == exec_count ? " #7" : "") + " }\n";
    out += "READ\n";
    for (int i = 0; i < exec_count; ++i) out += "EXECUTE {f" + std::to_string(i) + "}\n";
    out += "ITERATE {per.entry}\n";
    return out;
  }

 private:
  Rng& rng_;
};

}  // namespace bstkit::testing
