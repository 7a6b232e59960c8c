#include "bstkit/bst_lint.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bstkit/builtins.hpp"

namespace bstkit {

namespace {

class EffectAnalyzer {
 public:
  explicit EffectAnalyzer(const Program& program) : program_(program) {
    for (const Command& c : program.commands) {
      for (const auto* list : {&c.fields, &c.int_vars, &c.str_vars, &c.names}) {
        for (const auto& n : *list) values_.insert(n);
      }
    }
    values_.insert(std::string(sort_key_name));
  }

  bool is_value(const std::string& name) const { return values_.contains(name); }

  // Stack effect of executing `name` as an identifier.
  std::optional<int> call_effect(const std::string& name) {
    if (is_value(name)) return 1;
    if (const BuiltinInfo* b = find_builtin(name)) {
      if (b->id == Builtin::call_type) return 0;  // handlers are checked on their own
      if (!b->dynamic) return b->pushes - b->pops;
      return std::nullopt;
    }
    const TokenList* body = program_.function(name);
    if (body == nullptr) return std::nullopt;
    if (auto it = memo_.find(name); it != memo_.end()) return it->second;
    if (!active_.insert(name).second) return std::nullopt;  // recursion
    std::optional<int> e = effect(*body);
    active_.erase(name);
    memo_[name] = e;
    return e;
  }

  std::optional<int> effect(const TokenList& body) {
    // Each abstract stack slot remembers the effect of a function-ref
    // pushed there, when known.
    std::vector<std::optional<int>> slots;
    int net = 0;
    auto push = [&](std::optional<int> ref_effect) {
      ++net;
      slots.push_back(ref_effect);
    };
    auto pop = [&]() -> std::optional<int> {
      --net;
      if (slots.empty()) return std::nullopt;
      auto v = slots.back();
      slots.pop_back();
      return v;
    };
    auto apply = [&](int k) {
      if (k > 0) {
        for (int i = 0; i < k; ++i) push(std::nullopt);
      } else {
        for (int i = 0; i < -k; ++i) pop();
      }
    };

    for (const Token& t : body) {
      switch (t.kind) {
        case Token::Kind::string_literal:
        case Token::Kind::int_literal:
          push(std::nullopt);
          break;
        case Token::Kind::block:
          push(effect(t.body));
          break;
        case Token::Kind::quoted_identifier:
          push(is_value(t.text) ? std::nullopt : call_effect(t.text));
          break;
        case Token::Kind::identifier: {
          const BuiltinInfo* b = find_builtin(t.text);
          if (b != nullptr && b->id == Builtin::if_) {
            auto else_e = pop();
            auto then_e = pop();
            pop();
            if (!else_e || !then_e || *else_e != *then_e) return std::nullopt;
            apply(*then_e);
          } else if (b != nullptr && b->id == Builtin::while_) {
            auto body_e = pop();
            auto pred_e = pop();
            if (!body_e || !pred_e || *pred_e != 1 || *body_e != 0) return std::nullopt;
          } else {
            auto e = call_effect(t.text);
            if (!e) return std::nullopt;
            apply(*e);
          }
          break;
        }
      }
    }
    return net;
  }

 private:
  const Program& program_;
  std::set<std::string> values_;
  std::map<std::string, std::optional<int>> memo_;
  std::set<std::string> active_;
};

void collect_identifiers(const TokenList& body, std::vector<const Token*>& out) {
  for (const Token& t : body) {
    if (t.kind == Token::Kind::block) {
      collect_identifiers(t.body, out);
    } else if (t.kind == Token::Kind::identifier || t.kind == Token::Kind::quoted_identifier) {
      out.push_back(&t);
    }
  }
}

std::string signed_str(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

}  // namespace

std::optional<int> stack_effect(const Program& program, const TokenList& body) {
  return EffectAnalyzer(program).effect(body);
}

std::vector<LintFinding> lint(const Program& program,
                              const std::vector<Diagnostic>& parse_diagnostics) {
  std::vector<LintFinding> findings;
  for (const Diagnostic& d : parse_diagnostics) {
    if (d.code == bst_code::undefined_target) findings.push_back({d.message, d.line});
  }

  EffectAnalyzer analyzer(program);
  std::set<std::string> used;
  for (const Command& c : program.commands) {
    if (c.kind != CommandKind::function) continue;
    const TokenList* body = program.function(c.name);
    if (body == nullptr) continue;
    std::vector<const Token*> ids;
    collect_identifiers(*body, ids);
    for (const Token* t : ids) {
      used.insert(t->text);
      if (analyzer.is_value(t->text) || find_builtin(t->text) != nullptr ||
          program.function(t->text) != nullptr) {
        continue;
      }
      if (is_unsupported_builtin(t->text)) {
        findings.push_back({"function `" + c.name + "' uses unsupported builtin `" + t->text + "'", t->line});
      } else {
        findings.push_back({"function `" + c.name + "' refers to unknown identifier `" + t->text + "'", t->line});
      }
    }
  }

  if (const Command* entry = program.entry()) {
    for (const auto& f : entry->fields) {
      if (!used.contains(f)) findings.push_back({"ENTRY field `" + f + "' is never read", entry->line});
    }
  }

  for (const Command& c : program.commands) {
    if (c.kind != CommandKind::execute && c.kind != CommandKind::iterate) continue;
    std::optional<int> e = analyzer.call_effect(c.name);
    if (e && *e != 0) {
      findings.push_back({std::string(to_string(c.kind)) + " {" + c.name + "} has net stack effect " +
                              signed_str(*e),
                          c.line});
    }
  }
  std::stable_sort(findings.begin(), findings.end(),
                   [](const LintFinding& a, const LintFinding& b) { return a.line < b.line; });
  return findings;
}

}  // namespace bstkit
