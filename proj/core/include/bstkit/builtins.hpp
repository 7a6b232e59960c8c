#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace bstkit {

enum class Builtin {
  write, newline, cite, empty, skip, if_, while_, concat, assign,
  num_names, format_name, equals, less, greater, plus, minus, call_type,
};

struct BuiltinInfo {
  Builtin id;
  std::string_view name;
  int pops;     // fixed arguments consumed
  int pushes;   // fixed results produced
  bool dynamic; // net effect also depends on executed function-refs
};

std::span<const BuiltinInfo> builtin_table();
const BuiltinInfo* find_builtin(std::string_view name);

// Names of stock builtins this interpreter deliberately does not provide.
bool is_unsupported_builtin(std::string_view name);

inline constexpr std::string_view sort_key_name = "sort.key$";

}  // namespace bstkit
