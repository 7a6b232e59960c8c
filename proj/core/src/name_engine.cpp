#include "bstkit/name_engine.hpp"

#include <cctype>

#include "bstkit/text.hpp"

namespace bstkit {

namespace {

// Depth-0 words; commas become their own "," tokens when keep_commas is set.
std::vector<std::string> words(std::string_view s, bool keep_commas) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (depth > 0) --depth;
    } else if (depth == 0 && text::is_space(c)) {
      flush();
      continue;
    } else if (depth == 0 && c == ',') {
      flush();
      if (keep_commas) out.emplace_back(",");
      continue;
    }
    cur.push_back(c);
  }
  flush();
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

using Words = std::vector<std::string>;

// "von Last" text of the comma forms: von runs through the last lowercase
// word that precedes the final word.
void split_von_last(const Words& w, NameParts& parts) {
  std::size_t von_end = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (is_von_word(w[i])) von_end = i + 1;
  }
  parts.von.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(von_end));
  parts.last.assign(w.begin() + static_cast<std::ptrdiff_t>(von_end), w.end());
}

}  // namespace

bool is_von_word(std::string_view word) {
  for (char c : word) {
    if (c == '{') return false;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      return std::islower(static_cast<unsigned char>(c)) != 0;
    }
  }
  return false;
}

std::vector<std::string> split_names(std::string_view list) {
  const Words w = words(list, false);
  std::vector<std::string> names;
  Words current;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const bool separator = w[i] == "and" && i > 0 && i + 1 < w.size() && !current.empty();
    if (separator) {
      names.push_back(join(current, " "));
      current.clear();
    } else {
      current.push_back(w[i]);
    }
  }
  if (!current.empty()) names.push_back(join(current, " "));
  return names;
}

std::vector<std::string> tokenize_name(std::string_view name) {
  return words(name, false);
}

NameParts parse_name(std::string_view name) {
  std::vector<Words> segments(1);
  for (auto& w : words(name, true)) {
    if (w == ",") {
      segments.emplace_back();
    } else {
      segments.back().push_back(std::move(w));
    }
  }
  if (segments.size() > 3) {
    throw NameError("too many commas in name `" + std::string(name) + "'");
  }
  bool any = false;
  for (const auto& seg : segments) any = any || !seg.empty();
  if (!any) throw NameError("empty name `" + std::string(name) + "'");

  NameParts parts;
  if (segments.size() == 1) {
    const Words& w = segments[0];
    const std::size_t n = w.size();
    std::size_t lo = n;
    std::size_t hi = n;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (is_von_word(w[i])) {
        if (lo == n) lo = i;
        hi = i;
      }
    }
    auto at = [&](std::size_t i) { return w.begin() + static_cast<std::ptrdiff_t>(i); };
    if (lo == n) {
      parts.first.assign(w.begin(), at(n - 1));
      parts.last.assign(at(n - 1), w.end());
    } else {
      parts.first.assign(w.begin(), at(lo));
      parts.von.assign(at(lo), at(hi + 1));
      parts.last.assign(at(hi + 1), w.end());
    }
    return parts;
  }

  if (segments[0].empty()) {
    throw NameError("missing last name in `" + std::string(name) + "'");
  }
  split_von_last(segments[0], parts);
  if (segments.size() == 2) {
    parts.first = std::move(segments[1]);
  } else {
    parts.jr = std::move(segments[1]);
    parts.first = std::move(segments[2]);
  }
  return parts;
}

NameTemplate parse_template(std::string_view tmpl) {
  NameTemplate out;
  std::size_t i = 0;
  const auto bad = [&](const std::string& why) {
    return NameError("malformed name template `" + std::string(tmpl) + "': " + why);
  };
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') throw bad("text outside a brace piece");
    const std::size_t close = tmpl.find('}', i + 1);
    if (close == std::string_view::npos) throw bad("unclosed brace");
    std::string_view body = tmpl.substr(i + 1, close - i - 1);
    if (body.find('{') != std::string_view::npos) throw bad("nested braces");
    if (body.empty()) throw bad("empty piece");

    TemplatePiece piece{};
    switch (body[0]) {
      case 'f': piece.part = NamePart::first; break;
      case 'v': piece.part = NamePart::von; break;
      case 'l': piece.part = NamePart::last; break;
      case 'j': piece.part = NamePart::jr; break;
      default: throw bad(std::string("unknown part letter '") + body[0] + "'");
    }
    std::size_t k = 1;
    if (k < body.size() && body[k] == body[0]) {
      piece.full = true;
      ++k;
    }
    if (k < body.size() && std::isalpha(static_cast<unsigned char>(body[k]))) {
      throw bad("part letters must be one of f, ff, v, vv, l, ll, j, jj");
    }
    piece.suffix = std::string(body.substr(k));
    out.pieces.push_back(std::move(piece));
    i = close + 1;
  }
  return out;
}

std::string format_name(const NameParts& parts, const NameTemplate& tmpl) {
  std::string out;
  for (const TemplatePiece& piece : tmpl.pieces) {
    const Words* tokens = nullptr;
    switch (piece.part) {
      case NamePart::first: tokens = &parts.first; break;
      case NamePart::von: tokens = &parts.von; break;
      case NamePart::last: tokens = &parts.last; break;
      case NamePart::jr: tokens = &parts.jr; break;
    }
    if (tokens->empty()) continue;
    if (piece.full) {
      out += join(*tokens, " ");
    } else {
      Words initials;
      for (const auto& t : *tokens) {
        std::size_t p = 0;
        while (p < t.size() && t[p] == '{') ++p;
        if (p < t.size()) initials.emplace_back(1, t[p]);
      }
      out += join(initials, ". ");
    }
    out += piece.suffix;
  }
  return out;
}

std::string format_name(std::string_view name, std::string_view tmpl) {
  return format_name(parse_name(name), parse_template(tmpl));
}

}  // namespace bstkit
