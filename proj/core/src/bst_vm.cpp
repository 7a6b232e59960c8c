#include "bstkit/bst_vm.hpp"

#include <algorithm>

#include "bstkit/builtins.hpp"
#include "bstkit/name_engine.hpp"
#include "bstkit/text.hpp"

namespace bstkit {

std::string_view type_name(const Value& v) {
  switch (v.index()) {
    case 0: return "integer";
    case 1: return "string";
    case 2: return "missing field";
    default: return "function";
  }
}

std::string describe(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (auto* s = std::get_if<std::string>(&v)) return '"' + *s + '"';
  if (auto* m = std::get_if<Missing>(&v)) return "missing(" + m->field + ")";
  const auto& ref = std::get<FunctionRef>(v);
  return ref.body ? std::string("{...}") : "'" + ref.name;
}

std::string describe(std::span<const Value> stack) {
  std::string out = "[";
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (i > 0) out += ", ";
    out += describe(stack[i]);
  }
  return out + "]";
}

Vm::Vm(const Program& program, std::vector<const Database*> databases, VmOptions options)
    : program_(program), databases_(std::move(databases)), options_(options) {
  auto declare = [&](const std::string& name, VarKind kind, std::size_t index) {
    if (vars_.contains(name) || std::find(fields_.begin(), fields_.end(), name) != fields_.end()) {
      warn("`" + name + "' is declared more than once; later declaration ignored", 0);
      return false;
    }
    vars_.emplace(name, VarSlot{kind, index});
    return true;
  };
  vars_.emplace(std::string(sort_key_name), VarSlot{VarKind::sort_key, 0});
  for (const Command& cmd : program_.commands) {
    switch (cmd.kind) {
      case CommandKind::entry:
        for (const auto& f : cmd.fields) {
          if (std::find(fields_.begin(), fields_.end(), f) == fields_.end()) fields_.push_back(f);
        }
        for (const auto& n : cmd.int_vars) {
          if (declare(n, VarKind::entry_int, entry_int_count_)) ++entry_int_count_;
        }
        for (const auto& n : cmd.str_vars) {
          if (declare(n, VarKind::entry_str, entry_str_count_)) ++entry_str_count_;
        }
        break;
      case CommandKind::integers:
        for (const auto& n : cmd.names) {
          if (declare(n, VarKind::global_int, global_ints_.size())) global_ints_.push_back(0);
        }
        break;
      case CommandKind::strings:
        for (const auto& n : cmd.names) {
          if (declare(n, VarKind::global_str, global_strs_.size())) global_strs_.emplace_back();
        }
        break;
      default:
        break;
    }
  }
}

void Vm::warn(std::string message, int line) {
  diagnostics_.push_back(Diagnostic{Severity::warning, message, line, {}, {}});
  log_.log_warning(std::move(message));
}

void Vm::read(const AuxFile& aux) {
  entries_.clear();
  for (const std::string& key : unique_citation_order(aux)) {
    const Entry* found = nullptr;
    for (const Database* db : databases_) {
      if ((found = db->lookup(key)) != nullptr) break;
    }
    if (found == nullptr) {
      warn("no database entry for citation `" + key + "'", line_);
      continue;
    }
    entries_.push_back(EntryState{found, std::vector<std::int64_t>(entry_int_count_, 0),
                                  std::vector<std::string>(entry_str_count_), {}});
  }
}

void Vm::execute(std::string_view function, int line) {
  current_.reset();
  call(function, line);
}

void Vm::iterate(std::string_view function, int line) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    current_ = i;
    call(function, line);
  }
  current_.reset();
}

void Vm::sort() {
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const EntryState& a, const EntryState& b) { return a.sort_key < b.sort_key; });
}

std::vector<std::string> Vm::entry_order() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.entry->key);
  return out;
}

std::optional<Value> Vm::global(std::string_view name) const {
  const VarSlot* slot = find_var(name);
  if (slot == nullptr) return std::nullopt;
  if (slot->kind == VarKind::global_int) return Value{global_ints_[slot->index]};
  if (slot->kind == VarKind::global_str) return Value{global_strs_[slot->index]};
  return std::nullopt;
}

const Vm::VarSlot* Vm::find_var(std::string_view name) const {
  auto it = vars_.find(std::string(name));
  return it == vars_.end() ? nullptr : &it->second;
}

Vm::EntryState& Vm::current_entry(std::string_view who, int line) {
  if (!current_) {
    throw VmError("`" + std::string(who) + "' needs a current entry (only valid during ITERATE)", line);
  }
  return entries_[*current_];
}

Value Vm::pop(std::string_view who) {
  if (stack_.empty()) throw VmError("stack underflow in `" + std::string(who) + "'", line_);
  Value v = std::move(stack_.back());
  stack_.pop_back();
  return v;
}

std::string Vm::pop_string(std::string_view who, int line) {
  Value v = pop(who);
  if (auto* s = std::get_if<std::string>(&v)) return std::move(*s);
  if (std::holds_alternative<Missing>(v)) return {};
  throw VmError("`" + std::string(who) + "' expected a string, got " + std::string(type_name(v)), line);
}

std::int64_t Vm::pop_int(std::string_view who, int line) {
  Value v = pop(who);
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  throw VmError("`" + std::string(who) + "' expected an integer, got " + std::string(type_name(v)), line);
}

FunctionRef Vm::pop_ref(std::string_view who, int line) {
  Value v = pop(who);
  if (auto* r = std::get_if<FunctionRef>(&v)) return std::move(*r);
  throw VmError("`" + std::string(who) + "' expected a function, got " + std::string(type_name(v)), line);
}

void Vm::exec(const Token& token) {
  line_ = token.line;
  switch (token.kind) {
    case Token::Kind::string_literal:
      push(token.text);
      break;
    case Token::Kind::int_literal:
      push(token.value);
      break;
    case Token::Kind::block:
      push(FunctionRef{{}, &token.body});
      break;
    case Token::Kind::quoted_identifier:
      push(FunctionRef{token.text, nullptr});
      break;
    case Token::Kind::identifier:
      call(token.text, token.line);
      break;
  }
}

void Vm::exec_body(const TokenList& body) {
  if (depth_ >= options_.max_call_depth) {
    throw VmError("call depth limit of " + std::to_string(options_.max_call_depth) + " exceeded", line_);
  }
  struct DepthGuard {
    std::size_t& d;
    explicit DepthGuard(std::size_t& depth) : d(depth) { ++d; }
    ~DepthGuard() { --d; }
  } guard(depth_);
  for (const Token& t : body) exec(t);
}

void Vm::call_ref(const FunctionRef& ref, int line) {
  if (ref.body != nullptr) {
    exec_body(*ref.body);
  } else {
    call(ref.name, line);
  }
}

void Vm::call(std::string_view name, int line) {
  if (std::find(fields_.begin(), fields_.end(), name) != fields_.end()) {
    if (!current_) {
      throw VmError("field `" + std::string(name) + "' accessed with no current entry", line);
    }
    const Entry& e = *entries_[*current_].entry;
    if (const std::string* v = e.find(name)) {
      push(*v);
    } else {
      push(Missing{std::string(name), e.key});
    }
    return;
  }
  if (const VarSlot* slot = find_var(name)) {
    switch (slot->kind) {
      case VarKind::global_int: push(global_ints_[slot->index]); return;
      case VarKind::global_str: push(global_strs_[slot->index]); return;
      case VarKind::entry_int: push(current_entry(name, line).ints[slot->index]); return;
      case VarKind::entry_str: push(current_entry(name, line).strs[slot->index]); return;
      case VarKind::sort_key: push(current_entry(name, line).sort_key); return;
    }
  }
  if (const BuiltinInfo* b = find_builtin(name)) {
    apply_builtin(*b, line);
    return;
  }
  if (const TokenList* body = program_.function(name)) {
    exec_body(*body);
    return;
  }
  if (is_unsupported_builtin(name)) {
    throw VmError("unsupported builtin `" + std::string(name) + "'", line);
  }
  throw VmError("unknown identifier `" + std::string(name) + "'", line);
}

void Vm::apply_builtin(const BuiltinInfo& info, int line) {
  const std::string_view who = info.name;
  switch (info.id) {
    case Builtin::write: {
      Value v = pop(who);
      if (auto* s = std::get_if<std::string>(&v)) {
        bbl_.append(*s);
      } else if (auto* m = std::get_if<Missing>(&v)) {
        warn("`" + m->field + "' is a missing field, not a string, for entry " + m->entry_key, line);
      } else {
        throw VmError("`write$' expected a string, got " + std::string(type_name(v)), line);
      }
      break;
    }
    case Builtin::newline:
      bbl_.flush_line();
      break;
    case Builtin::cite:
      push(current_entry(who, line).entry->key);
      break;
    case Builtin::empty: {
      Value v = pop(who);
      if (std::holds_alternative<Missing>(v)) {
        push(std::int64_t{1});
      } else if (auto* s = std::get_if<std::string>(&v)) {
        push(std::int64_t{text::is_blank(*s) ? 1 : 0});
      } else {
        throw VmError("`empty$' expected a string, got " + std::string(type_name(v)), line);
      }
      break;
    }
    case Builtin::skip:
      break;
    case Builtin::if_: {
      FunctionRef else_branch = pop_ref(who, line);
      FunctionRef then_branch = pop_ref(who, line);
      const std::int64_t cond = pop_int(who, line);
      call_ref(cond > 0 ? then_branch : else_branch, line);
      break;
    }
    case Builtin::while_: {
      FunctionRef body = pop_ref(who, line);
      FunctionRef predicate = pop_ref(who, line);
      std::size_t iterations = 0;
      while (true) {
        call_ref(predicate, line);
        if (pop_int(who, line) <= 0) break;
        if (++iterations > options_.while_limit) {
          throw VmError("`while$' exceeded the iteration limit of " +
                            std::to_string(options_.while_limit),
                        line);
        }
        call_ref(body, line);
      }
      break;
    }
    case Builtin::concat: {
      std::string b = pop_string(who, line);
      std::string a = pop_string(who, line);
      push(a + b);
      break;
    }
    case Builtin::assign: {
      FunctionRef target = pop_ref(who, line);
      if (target.body != nullptr) throw VmError("`:=' target must be a quoted variable name", line);
      Value v = pop(who);
      const VarSlot* slot = find_var(target.name);
      if (slot == nullptr) {
        throw VmError("`:=' target `" + target.name + "' is not an assignable variable", line);
      }
      const bool wants_int = slot->kind == VarKind::global_int || slot->kind == VarKind::entry_int;
      if (wants_int) {
        auto* i = std::get_if<std::int64_t>(&v);
        if (i == nullptr) {
          throw VmError("`:=' type mismatch: integer variable `" + target.name + "' given " +
                            std::string(type_name(v)),
                        line);
        }
        if (slot->kind == VarKind::global_int) {
          global_ints_[slot->index] = *i;
        } else {
          current_entry(target.name, line).ints[slot->index] = *i;
        }
        break;
      }
      std::string s;
      if (auto* str = std::get_if<std::string>(&v)) {
        s = std::move(*str);
      } else if (!std::holds_alternative<Missing>(v)) {
        throw VmError("`:=' type mismatch: string variable `" + target.name + "' given " +
                          std::string(type_name(v)),
                      line);
      }
      if (slot->kind == VarKind::global_str) {
        global_strs_[slot->index] = std::move(s);
      } else if (slot->kind == VarKind::entry_str) {
        current_entry(target.name, line).strs[slot->index] = std::move(s);
      } else {
        current_entry(target.name, line).sort_key = std::move(s);
      }
      break;
    }
    case Builtin::num_names:
      push(static_cast<std::int64_t>(split_names(pop_string(who, line)).size()));
      break;
    case Builtin::format_name: {
      std::string tmpl = pop_string(who, line);
      const std::int64_t index = pop_int(who, line);
      std::string list = pop_string(who, line);
      const auto names = split_names(list);
      if (index < 1 || index > static_cast<std::int64_t>(names.size())) {
        std::string where = current_ ? " for entry " + entries_[*current_].entry->key : "";
        throw VmError("`format.name$' name index " + std::to_string(index) + " out of range (" +
                          std::to_string(names.size()) + " names)" + where,
                      line);
      }
      try {
        push(format_name(names[static_cast<std::size_t>(index - 1)], tmpl));
      } catch (const NameError& e) {
        throw VmError(std::string("`format.name$' ") + e.what(), line);
      }
      break;
    }
    case Builtin::equals: {
      Value b = pop(who);
      Value a = pop(who);
      auto as_text = [](const Value& v) -> const std::string* {
        static const std::string empty;
        if (auto* s = std::get_if<std::string>(&v)) return s;
        if (std::holds_alternative<Missing>(v)) return &empty;
        return nullptr;
      };
      auto* ia = std::get_if<std::int64_t>(&a);
      auto* ib = std::get_if<std::int64_t>(&b);
      if (ia && ib) {
        push(std::int64_t{*ia == *ib ? 1 : 0});
      } else if (as_text(a) && as_text(b)) {
        push(std::int64_t{*as_text(a) == *as_text(b) ? 1 : 0});
      } else {
        throw VmError("`=' cannot compare " + std::string(type_name(a)) + " with " +
                          std::string(type_name(b)),
                      line);
      }
      break;
    }
    case Builtin::less:
    case Builtin::greater:
    case Builtin::plus:
    case Builtin::minus: {
      const std::int64_t b = pop_int(who, line);
      const std::int64_t a = pop_int(who, line);
      std::int64_t r = 0;
      if (info.id == Builtin::less) r = a < b ? 1 : 0;
      else if (info.id == Builtin::greater) r = a > b ? 1 : 0;
      else if (info.id == Builtin::plus) r = a + b;
      else r = a - b;
      push(r);
      break;
    }
    case Builtin::call_type: {
      const Entry& e = *current_entry(who, line).entry;
      if (const TokenList* body = program_.function(e.entry_type)) {
        exec_body(*body);
      } else {
        warn("no handler function for entry type `" + e.entry_type + "'", line);
      }
      break;
    }
  }
}

RunResult run(const Program& program, const AuxFile& aux, std::span<const Database> databases,
              const VmOptions& options) {
  std::vector<const Database*> dbs;
  for (const Database& db : databases) dbs.push_back(&db);
  Vm vm(program, std::move(dbs), options);
  RunResult result;

  auto fail = [&](std::string message, int line) {
    vm.diagnostics().push_back(Diagnostic{Severity::error, message, line, {}, {}});
    vm.log().log_error(std::move(message));
    result.ok = false;
  };

  for (const Command& cmd : program.commands) {
    try {
      switch (cmd.kind) {
        case CommandKind::read: vm.read(aux); break;
        case CommandKind::execute: vm.execute(cmd.name, cmd.line); break;
        case CommandKind::iterate: vm.iterate(cmd.name, cmd.line); break;
        case CommandKind::sort: vm.sort(); break;
        default: break;
      }
    } catch (const VmError& e) {
      fail(e.what(), e.line());
      break;
    }
  }
  if (result.ok && !vm.stack().empty()) {
    fail("stack not empty at end, stack=" + describe(vm.stack()), 0);
  }

  result.final_stack = vm.stack();
  result.entry_order = vm.entry_order();
  for (const auto& e : vm.entries()) result.sort_keys.push_back(e.sort_key);
  result.bbl = vm.bbl().finalize();
  result.log = vm.log();
  result.diagnostics = std::move(vm.diagnostics());
  return result;
}

}  // namespace bstkit
