#include "bstkit/bib_database.hpp"

#include <algorithm>

#include "bstkit/text.hpp"

namespace bstkit {

const std::string* Entry::find(std::string_view name) const {
  for (const auto& [k, v] : fields) {
    if (k == name) return &v;
  }
  return nullptr;
}

bool Database::add(Entry entry) {
  if (index_.contains(entry.key)) return false;
  index_.emplace(entry.key, entries_.size());
  entries_.push_back(std::move(entry));
  return true;
}

const Entry* Database::lookup(std::string_view key) const {
  auto it = index_.find(std::string(key));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::optional<std::string> get_field(const Entry& entry, std::string_view name) {
  if (const std::string* v = entry.find(text::to_lower(name))) return *v;
  return std::nullopt;
}

namespace {

struct Failure {
  std::string message;
  std::size_t pos;
};

bool is_name_char(char c) {
  if (text::is_space(c)) return false;
  switch (c) {
    case '{': case '}': case '(': case ')': case ',': case '=':
    case '"': case '#': case '%': case '@': case '\'':
      return false;
    default:
      return true;
  }
}

class BibParser {
 public:
  BibParser(std::string_view text, std::string_view source)
      : text_(text), source_(source) {}

  BibParseResult parse() {
    if (auto bad = text::find_invalid_utf8(text_)) {
      error("invalid UTF-8 byte sequence", *bad);
      return std::move(result_);
    }
    std::size_t at;
    while ((at = text_.find('@', pos_)) != std::string_view::npos) {
      pos_ = at;
      try {
        parse_entry();
      } catch (const Failure& f) {
        error(f.message, f.pos);
        pos_ = resume_point(at);
      }
    }
    return std::move(result_);
  }

 private:
  void parse_entry() {
    const std::size_t start = pos_;
    ++pos_;  // '@'
    skip_ws();
    std::string type = text::to_lower(read_name());
    if (type.empty()) throw Failure{"expected entry type after '@'", start};

    if (type == "string" || type == "preamble" || type == "comment") {
      warning("`@" + type + "' blocks are not supported; block ignored", start);
      skip_ws();
      if (peek() == '{') skip_balanced(pos_);
      return;
    }

    skip_ws();
    if (peek() == '(') throw Failure{"parenthesized entries are not supported", pos_};
    if (peek() != '{') throw Failure{"expected '{' after @" + type, pos_};
    const std::size_t open = pos_++;

    skip_ws();
    const std::size_t key_pos = pos_;
    while (!at_end() && !text::is_space(peek()) && peek() != ',' && peek() != '}' &&
           peek() != '{') {
      ++pos_;
    }
    std::string key(text_.substr(key_pos, pos_ - key_pos));
    if (key.empty()) throw Failure{"missing citation key", key_pos};
    skip_ws();
    if (at_end()) throw Failure{"unbalanced braces in entry `" + key + "'", open};
    if (peek() != ',' && peek() != '}') {
      throw Failure{"citation key `" + key + "' contains an invalid character", key_pos};
    }

    Entry entry;
    entry.key = std::move(key);
    entry.entry_type = std::move(type);
    entry.line = line_at(start);

    while (true) {
      skip_ws();
      if (at_end()) throw Failure{"unbalanced braces in entry `" + entry.key + "'", open};
      if (peek() == '}') {
        ++pos_;
        break;
      }
      if (peek() != ',') throw Failure{"expected ',' or '}' in entry `" + entry.key + "'", pos_};
      ++pos_;
      skip_ws();
      if (at_end()) throw Failure{"unbalanced braces in entry `" + entry.key + "'", open};
      if (peek() == '}') {  // trailing comma
        ++pos_;
        break;
      }
      parse_field(entry, open);
    }

    if (!result_.db.add(entry)) {
      warning("duplicate entry `" + entry.key + "'; later definition ignored", start);
    }
  }

  void parse_field(Entry& entry, std::size_t open) {
    const std::size_t name_pos = pos_;
    std::string name = text::to_lower(read_name());
    if (name.empty()) throw Failure{"expected field name in entry `" + entry.key + "'", pos_};
    skip_ws();
    if (peek() != '=') throw Failure{"expected '=' after field `" + name + "'", pos_};
    ++pos_;
    skip_ws();

    bool keep = true;
    std::string value = read_value(entry, name, keep, open);
    skip_ws();
    while (peek() == '#') {
      if (keep) {
        warning("`#' concatenation is not supported; field `" + name + "' of entry `" +
                    entry.key + "' ignored",
                pos_);
      }
      keep = false;
      ++pos_;
      skip_ws();
      read_value(entry, name, keep, open);
      skip_ws();
    }
    if (!keep) return;
    if (entry.find(name) != nullptr) {
      warning("duplicate field `" + name + "' in entry `" + entry.key + "'; later value ignored",
              name_pos);
      return;
    }
    entry.fields.emplace_back(std::move(name), text::collapse_whitespace(value));
  }

  std::string read_value(const Entry& entry, const std::string& name, bool& keep,
                         std::size_t open) {
    if (at_end()) throw Failure{"unbalanced braces in entry `" + entry.key + "'", open};
    const char c = peek();
    if (c == '{') {
      const std::size_t b = pos_;
      skip_balanced(b);
      return std::string(text_.substr(b + 1, pos_ - b - 2));
    }
    if (c == '"') {
      const std::size_t b = pos_++;
      int depth = 0;
      while (true) {
        if (at_end()) throw Failure{"unterminated quoted value for field `" + name + "'", b};
        const char d = text_[pos_++];
        if (d == '{') ++depth;
        else if (d == '}') {
          if (--depth < 0) throw Failure{"unbalanced braces in value of field `" + name + "'", b};
        } else if (d == '"' && depth == 0) {
          break;
        }
      }
      return std::string(text_.substr(b + 1, pos_ - b - 2));
    }
    if (c >= '0' && c <= '9') {
      const std::size_t b = pos_;
      while (!at_end() && peek() >= '0' && peek() <= '9') ++pos_;
      return std::string(text_.substr(b, pos_ - b));
    }
    const std::size_t b = pos_;
    std::string macro = read_name();
    if (macro.empty()) throw Failure{"expected value for field `" + name + "'", b};
    if (keep) {
      warning("macro `" + macro + "' is not supported; field `" + name + "' of entry `" +
                  entry.key + "' ignored",
              b);
    }
    keep = false;
    return {};
  }

  // pos_ is on '{'; leaves pos_ just past the matching '}'.
  void skip_balanced(std::size_t open) {
    int depth = 0;
    while (!at_end()) {
      const char c = text_[pos_++];
      if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) return;
    }
    throw Failure{"unbalanced braces", open};
  }

  std::string read_name() {
    const std::size_t b = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  // Next '@' that begins a line (ignoring indentation) after `from`.
  std::size_t resume_point(std::size_t from) const {
    std::size_t p = from + 1;
    while ((p = text_.find('@', p)) != std::string_view::npos) {
      std::size_t q = p;
      while (q > 0 && (text_[q - 1] == ' ' || text_[q - 1] == '\t')) --q;
      if (q == 0 || text_[q - 1] == '\n') return p;
      ++p;
    }
    return text_.size();
  }

  void skip_ws() {
    while (!at_end() && text::is_space(peek())) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void error(std::string message, std::size_t pos) { report(Severity::error, std::move(message), pos); }
  void warning(std::string message, std::size_t pos) { report(Severity::warning, std::move(message), pos); }
  void report(Severity s, std::string message, std::size_t pos) {
    result_.diagnostics.push_back(
        Diagnostic{s, std::move(message), line_at(pos), source_, {}});
  }

  // Positions are queried mostly in increasing order; a cursor keeps that linear.
  int line_at(std::size_t pos) {
    pos = std::min(pos, text_.size());
    if (pos < line_pos_) {
      line_pos_ = 0;
      line_ = 1;
    }
    line_ += static_cast<int>(std::count(text_.begin() + static_cast<std::ptrdiff_t>(line_pos_),
                                         text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
    line_pos_ = pos;
    return line_;
  }

  std::string_view text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_pos_ = 0;
  int line_ = 1;
  BibParseResult result_;
};

}  // namespace

BibParseResult parse_bib(std::string_view text, std::string_view source_name) {
  return BibParser(text, source_name).parse();
}

}  // namespace bstkit
