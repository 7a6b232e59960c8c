#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bstkit/diagnostics.hpp"

namespace bstkit {

struct Token {
  enum class Kind { string_literal, int_literal, identifier, quoted_identifier, block };

  Kind kind = Kind::identifier;
  std::string text;          // string contents or identifier name
  std::int64_t value = 0;    // int_literal only
  std::vector<Token> body;   // block only
  int line = 0;

  static Token string_lit(std::string s, int line = 0);
  static Token int_lit(std::int64_t v, int line = 0);
  static Token ident(std::string name, int line = 0);
  static Token quoted(std::string name, int line = 0);
  static Token block(std::vector<Token> body, int line = 0);

  // Structural equality; source lines are ignored.
  friend bool operator==(const Token& a, const Token& b) {
    return a.kind == b.kind && a.text == b.text && a.value == b.value &&
           a.body == b.body;
  }
};

using TokenList = std::vector<Token>;

enum class CommandKind { entry, function, read, execute, iterate, sort, strings, integers };

std::string_view to_string(CommandKind kind);

struct Command {
  CommandKind kind = CommandKind::read;
  int line = 0;
  std::string name;  // function, execute, iterate

  // entry: fields, integer entry variables, string entry variables.
  // strings/integers: the declared global names go in `names`.
  std::vector<std::string> fields;
  std::vector<std::string> int_vars;
  std::vector<std::string> str_vars;
  std::vector<std::string> names;

  friend bool operator==(const Command& a, const Command& b) {
    return a.kind == b.kind && a.name == b.name && a.fields == b.fields &&
           a.int_vars == b.int_vars && a.str_vars == b.str_vars &&
           a.names == b.names;
  }
};

struct Program {
  std::vector<Command> commands;          // source order
  std::map<std::string, TokenList> functions;

  const Command* entry() const;
  const TokenList* function(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

struct BstParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
};

// Diagnostic codes emitted by parse_bst.
namespace bst_code {
inline constexpr std::string_view syntax = "syntax";
inline constexpr std::string_view undefined_target = "undefined-target";
inline constexpr std::string_view redefinition = "redefinition";
inline constexpr std::string_view unsupported = "unsupported-command";
}  // namespace bst_code

BstParseResult parse_bst(std::string_view text, std::string_view source_name);

// Tokenizes a function body (no surrounding braces).
TokenList tokenize_body(std::string_view text, std::vector<Diagnostic>* diags = nullptr);

// Canonical source text; parse_bst(write_bst(p)) reproduces p.
std::string write_bst(const Program& program);
std::string write_tokens(const TokenList& tokens);

bool is_identifier_char(char c);

}  // namespace bstkit
