#include "bstkit/bst_lang.hpp"

#include <algorithm>
#include <charconv>

#include "bstkit/builtins.hpp"
#include "bstkit/text.hpp"

namespace bstkit {

Token Token::string_lit(std::string s, int line) {
  Token t;
  t.kind = Kind::string_literal;
  t.text = std::move(s);
  t.line = line;
  return t;
}

Token Token::int_lit(std::int64_t v, int line) {
  Token t;
  t.kind = Kind::int_literal;
  t.value = v;
  t.line = line;
  return t;
}

Token Token::ident(std::string name, int line) {
  Token t;
  t.kind = Kind::identifier;
  t.text = std::move(name);
  t.line = line;
  return t;
}

Token Token::quoted(std::string name, int line) {
  Token t;
  t.kind = Kind::quoted_identifier;
  t.text = std::move(name);
  t.line = line;
  return t;
}

Token Token::block(std::vector<Token> body, int line) {
  Token t;
  t.kind = Kind::block;
  t.body = std::move(body);
  t.line = line;
  return t;
}

std::string_view to_string(CommandKind kind) {
  switch (kind) {
    case CommandKind::entry: return "ENTRY";
    case CommandKind::function: return "FUNCTION";
    case CommandKind::read: return "READ";
    case CommandKind::execute: return "EXECUTE";
    case CommandKind::iterate: return "ITERATE";
    case CommandKind::sort: return "SORT";
    case CommandKind::strings: return "STRINGS";
    case CommandKind::integers: return "INTEGERS";
  }
  return "?";
}

const Command* Program::entry() const {
  auto it = std::find_if(commands.begin(), commands.end(),
                         [](const Command& c) { return c.kind == CommandKind::entry; });
  return it == commands.end() ? nullptr : &*it;
}

const TokenList* Program::function(std::string_view name) const {
  auto it = functions.find(std::string(name));
  return it == functions.end() ? nullptr : &it->second;
}

bool is_identifier_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  switch (c) {
    case '.': case '$': case '-': case '_': case ':': case '=':
    case '<': case '>': case '+': case '*':
      return true;
    default:
      return false;
  }
}

namespace {

struct SyntaxError {
  std::string message;
  int line;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_blank() {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (!at_end() && text_[pos_] != '\n') ++pos_;
      } else if (text::is_space(c)) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  int line() const { return line_; }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  std::string read_word() {
    const std::size_t b = pos_;
    while (!at_end() && is_identifier_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(b, pos_ - b));
  }

  // Parses tokens up to the matching '}' (consumed). pos_ is just past '{'.
  TokenList read_block_body(int open_line) {
    TokenList out;
    while (true) {
      skip_blank();
      if (at_end()) throw SyntaxError{"unbalanced braces: '{' never closed", open_line};
      const char c = peek();
      const int ln = line_;
      if (c == '}') {
        ++pos_;
        return out;
      }
      if (c == '{') {
        ++pos_;
        out.push_back(Token::block(read_block_body(ln), ln));
      } else if (c == '"') {
        ++pos_;
        const std::size_t b = pos_;
        while (!at_end() && text_[pos_] != '"' && text_[pos_] != '\n') ++pos_;
        if (at_end() || text_[pos_] == '\n') {
          throw SyntaxError{"string literal not closed before end of line", ln};
        }
        out.push_back(Token::string_lit(std::string(text_.substr(b, pos_ - b)), ln));
        ++pos_;
      } else if (c == '#') {
        ++pos_;
        const std::size_t b = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string_view digits = text_.substr(b, pos_ - b);
        if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size() ||
            (!at_end() && is_identifier_char(peek()))) {
          throw SyntaxError{"malformed integer literal", ln};
        }
        out.push_back(Token::int_lit(v, ln));
      } else if (c == '\'') {
        ++pos_;
        std::string name = read_word();
        if (name.empty()) throw SyntaxError{"expected identifier after '''", ln};
        out.push_back(Token::quoted(std::move(name), ln));
      } else if (is_identifier_char(c)) {
        out.push_back(Token::ident(read_word(), ln));
      } else {
        throw SyntaxError{std::string("unexpected character '") + c + "'", ln};
      }
    }
  }

  // Reads a `{ ... }` argument group (after optional blanks).
  TokenList read_group(std::string_view command) {
    skip_blank();
    if (peek() != '{') {
      throw SyntaxError{"expected '{' argument for " + std::string(command), line_};
    }
    const int ln = line_;
    ++pos_;
    return read_block_body(ln);
  }

  // A group that must contain only identifiers.
  std::vector<std::string> read_names(std::string_view command) {
    const int ln = line_;
    std::vector<std::string> names;
    for (Token& t : read_group(command)) {
      if (t.kind != Token::Kind::identifier) {
        throw SyntaxError{std::string(command) + " expects identifiers only", ln};
      }
      names.push_back(std::move(t.text));
    }
    return names;
  }

  std::string read_single_name(std::string_view command) {
    const int ln = line_;
    auto names = read_names(command);
    if (names.size() != 1) {
      throw SyntaxError{std::string(command) + " expects exactly one name", ln};
    }
    return std::move(names.front());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

class BstParser {
 public:
  BstParser(std::string_view text, std::string_view source) : lex_(text), source_(source) {}

  BstParseResult parse() {
    try {
      while (true) {
        lex_.skip_blank();
        if (lex_.at_end()) break;
        parse_command();
      }
    } catch (const SyntaxError& e) {
      report(e.message, e.line, bst_code::syntax);
    }
    return std::move(result_);
  }

 private:
  void parse_command() {
    const int ln = lex_.line();
    Command cmd;
    cmd.line = ln;

    if (lex_.peek() == '{') {
      // `{SORT}` spelling.
      lex_.advance();
      TokenList inner = lex_.read_block_body(ln);
      if (inner.size() == 1 && inner[0].kind == Token::Kind::identifier &&
          text::to_lower(inner[0].text) == "sort") {
        cmd.kind = CommandKind::sort;
        result_.program.commands.push_back(std::move(cmd));
        return;
      }
      throw SyntaxError{"unexpected brace group at top level", ln};
    }

    const std::string word = lex_.read_word();
    if (word.empty()) {
      throw SyntaxError{std::string("unexpected character '") + lex_.peek() + "'", ln};
    }
    const std::string kw = text::to_lower(word);
    Program& prog = result_.program;

    if (kw == "entry") {
      cmd.kind = CommandKind::entry;
      cmd.fields = lex_.read_names("ENTRY");
      for (auto& f : cmd.fields) f = text::to_lower(f);
      cmd.int_vars = lex_.read_names("ENTRY");
      cmd.str_vars = lex_.read_names("ENTRY");
      if (prog.entry() != nullptr) {
        report("ENTRY may appear only once", ln, bst_code::redefinition);
        return;
      }
    } else if (kw == "function") {
      cmd.kind = CommandKind::function;
      cmd.name = lex_.read_single_name("FUNCTION");
      TokenList body = lex_.read_group("FUNCTION");
      if (prog.functions.contains(cmd.name)) {
        report("function `" + cmd.name + "' is already defined", ln, bst_code::redefinition);
        return;
      }
      prog.functions.emplace(cmd.name, std::move(body));
    } else if (kw == "read") {
      cmd.kind = CommandKind::read;
    } else if (kw == "sort") {
      cmd.kind = CommandKind::sort;
    } else if (kw == "execute" || kw == "iterate") {
      cmd.kind = kw == "execute" ? CommandKind::execute : CommandKind::iterate;
      cmd.name = lex_.read_single_name(to_string(cmd.kind));
      if (!prog.functions.contains(cmd.name) && find_builtin(cmd.name) == nullptr) {
        report(std::string(to_string(cmd.kind)) + " target `" + cmd.name +
                   "' is not defined at this point",
               ln, bst_code::undefined_target);
        return;
      }
    } else if (kw == "strings" || kw == "integers") {
      cmd.kind = kw == "strings" ? CommandKind::strings : CommandKind::integers;
      cmd.names = lex_.read_names(to_string(cmd.kind));
    } else if (kw == "macro" || kw == "reverse") {
      lex_.read_group(kw);
      if (kw == "macro") lex_.read_group(kw);
      report("unsupported command `" + word + "'", ln, bst_code::unsupported);
      return;
    } else {
      throw SyntaxError{"unknown command `" + word + "'", ln};
    }
    prog.commands.push_back(std::move(cmd));
  }

  void report(std::string message, int line, std::string_view code) {
    result_.diagnostics.push_back(
        Diagnostic{Severity::error, std::move(message), line, source_, std::string(code)});
  }

  Lexer lex_;
  std::string source_;
  BstParseResult result_;
};

void write_token(std::string& out, const Token& t) {
  switch (t.kind) {
    case Token::Kind::string_literal:
      out += '"' + t.text + '"';
      break;
    case Token::Kind::int_literal:
      out += '#' + std::to_string(t.value);
      break;
    case Token::Kind::identifier:
      out += t.text;
      break;
    case Token::Kind::quoted_identifier:
      out += '\'' + t.text;
      break;
    case Token::Kind::block:
      out += '{';
      for (const Token& inner : t.body) {
        out += ' ';
        write_token(out, inner);
      }
      out += " }";
      break;
  }
}

std::string write_names(const std::vector<std::string>& names) {
  std::string out = "{";
  for (const auto& n : names) out += ' ' + n;
  return out + " }";
}

}  // namespace

BstParseResult parse_bst(std::string_view text, std::string_view source_name) {
  return BstParser(text, source_name).parse();
}

TokenList tokenize_body(std::string_view text, std::vector<Diagnostic>* diags) {
  std::string wrapped = std::string(text) + "\n}";
  Lexer lex(wrapped);
  try {
    return lex.read_block_body(1);
  } catch (const SyntaxError& e) {
    if (diags) diags->push_back(Diagnostic{Severity::error, e.message, e.line, {}, std::string(bst_code::syntax)});
    return {};
  }
}

std::string write_tokens(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    write_token(out, tokens[i]);
  }
  return out;
}

std::string write_bst(const Program& program) {
  std::string out;
  for (const Command& c : program.commands) {
    switch (c.kind) {
      case CommandKind::entry:
        out += "ENTRY\n  " + write_names(c.fields) + "\n  " + write_names(c.int_vars) + "\n  " +
               write_names(c.str_vars) + "\n";
        break;
      case CommandKind::function: {
        const TokenList* body = program.function(c.name);
        out += "FUNCTION {" + c.name + "}\n{ " + (body ? write_tokens(*body) : "") + "\n}\n";
        break;
      }
      case CommandKind::read:
      case CommandKind::sort:
        out += std::string(to_string(c.kind)) + "\n";
        break;
      case CommandKind::execute:
      case CommandKind::iterate:
        out += std::string(to_string(c.kind)) + " {" + c.name + "}\n";
        break;
      case CommandKind::strings:
      case CommandKind::integers:
        out += std::string(to_string(c.kind)) + " " + write_names(c.names) + "\n";
        break;
    }
  }
  return out;
}

}  // namespace bstkit
