#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bstkit/aux_io.hpp"
#include "bstkit/bbl_emitter.hpp"
#include "bstkit/bib_database.hpp"
#include "bstkit/bst_lang.hpp"
#include "bstkit/builtins.hpp"
#include "bstkit/diagnostics.hpp"

namespace bstkit {

// Value pushed when a declared field is absent from the current entry.
// Carries enough context for the write$ warning.
struct Missing {
  std::string field;
  std::string entry_key;

  friend bool operator==(const Missing&, const Missing&) = default;
};

// Either a named reference ('name) or an anonymous block ({ ... }). A
// block reference points into the Program, which must outlive the Vm.
struct FunctionRef {
  std::string name;
  const TokenList* body = nullptr;

  friend bool operator==(const FunctionRef& a, const FunctionRef& b) {
    return a.name == b.name && a.body == b.body;
  }
};

using Value = std::variant<std::int64_t, std::string, Missing, FunctionRef>;

std::string_view type_name(const Value& v);
std::string describe(const Value& v);
std::string describe(std::span<const Value> stack);

class VmError : public std::runtime_error {
 public:
  VmError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct VmOptions {
  std::size_t while_limit = 1'000'000;
  std::size_t max_call_depth = 1000;
};

class Vm {
 public:
  struct EntryState {
    const Entry* entry = nullptr;
    std::vector<std::int64_t> ints;
    std::vector<std::string> strs;
    std::string sort_key;
  };

  // Declarations (ENTRY, STRINGS, INTEGERS) are taken from the whole
  // program up front. Databases are searched in order on READ.
  Vm(const Program& program, std::vector<const Database*> databases, VmOptions options = {});

  // Top-level commands.
  void read(const AuxFile& aux);
  void execute(std::string_view function, int line = 0);
  void iterate(std::string_view function, int line = 0);
  void sort();

  void exec(const Token& token);
  void exec_body(const TokenList& body);
  void call(std::string_view name, int line);
  void call_ref(const FunctionRef& ref, int line);

  void push(Value v) { stack_.push_back(std::move(v)); }
  Value pop(std::string_view who);
  const std::vector<Value>& stack() const noexcept { return stack_; }

  void set_current(std::optional<std::size_t> index) { current_ = index; }
  std::optional<std::size_t> current() const noexcept { return current_; }

  const std::vector<EntryState>& entries() const noexcept { return entries_; }
  std::vector<std::string> entry_order() const;

  std::optional<Value> global(std::string_view name) const;

  BblDocument& bbl() noexcept { return bbl_; }
  BlgLog& log() noexcept { return log_; }
  std::vector<Diagnostic>& diagnostics() noexcept { return diagnostics_; }

 private:
  enum class VarKind { global_int, global_str, entry_int, entry_str, sort_key };
  struct VarSlot {
    VarKind kind;
    std::size_t index;
  };

  void apply_builtin(const BuiltinInfo& info, int line);
  void warn(std::string message, int line);
  const VarSlot* find_var(std::string_view name) const;
  EntryState& current_entry(std::string_view who, int line);
  std::string pop_string(std::string_view who, int line);
  std::int64_t pop_int(std::string_view who, int line);
  FunctionRef pop_ref(std::string_view who, int line);

  const Program& program_;
  std::vector<const Database*> databases_;
  VmOptions options_;

  std::vector<std::string> fields_;
  std::unordered_map<std::string, VarSlot> vars_;
  std::vector<std::int64_t> global_ints_;
  std::vector<std::string> global_strs_;
  std::size_t entry_int_count_ = 0;
  std::size_t entry_str_count_ = 0;

  std::vector<Value> stack_;
  std::vector<EntryState> entries_;
  std::optional<std::size_t> current_;
  std::size_t depth_ = 0;
  int line_ = 0;

  BblDocument bbl_;
  BlgLog log_;
  std::vector<Diagnostic> diagnostics_;
};

struct RunResult {
  std::string bbl;
  BlgLog log;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> entry_order;  // after the last command
  std::vector<std::string> sort_keys;    // parallel to entry_order
  std::vector<Value> final_stack;
  bool ok = true;  // no error diagnostics
};

// Executes the program's commands in file order. Runtime errors abort the
// run; the text written so far is still returned.
RunResult run(const Program& program, const AuxFile& aux,
              std::span<const Database> databases, const VmOptions& options = {});

}  // namespace bstkit
