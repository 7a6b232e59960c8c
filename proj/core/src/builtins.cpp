#include "bstkit/builtins.hpp"

#include <algorithm>
#include <array>

namespace bstkit {

namespace {

constexpr std::array kBuiltins{
    BuiltinInfo{Builtin::write, "write$", 1, 0, false},
    BuiltinInfo{Builtin::newline, "newline$", 0, 0, false},
    BuiltinInfo{Builtin::cite, "cite$", 0, 1, false},
    BuiltinInfo{Builtin::empty, "empty$", 1, 1, false},
    BuiltinInfo{Builtin::skip, "skip$", 0, 0, false},
    BuiltinInfo{Builtin::if_, "if$", 3, 0, true},
    BuiltinInfo{Builtin::while_, "while$", 2, 0, true},
    BuiltinInfo{Builtin::concat, "*", 2, 1, false},
    BuiltinInfo{Builtin::assign, ":=", 2, 0, false},
    BuiltinInfo{Builtin::num_names, "num.names$", 1, 1, false},
    BuiltinInfo{Builtin::format_name, "format.name$", 3, 1, false},
    BuiltinInfo{Builtin::equals, "=", 2, 1, false},
    BuiltinInfo{Builtin::less, "<", 2, 1, false},
    BuiltinInfo{Builtin::greater, ">", 2, 1, false},
    BuiltinInfo{Builtin::plus, "+", 2, 1, false},
    BuiltinInfo{Builtin::minus, "-", 2, 1, false},
    BuiltinInfo{Builtin::call_type, "call.type$", 0, 0, true},
};

constexpr std::array<std::string_view, 22> kUnsupported{
    "add.period$", "change.case$", "chr.to.int$", "duplicate$", "entry.max$",
    "global.max$", "int.to.chr$", "int.to.str$", "missing$",   "pop$",
    "preamble$",   "purify$",      "quote$",      "stack$",     "substring$",
    "swap$",       "text.length$", "text.prefix$", "top$",      "type$",
    "warning$",    "width$",
};

}  // namespace

std::span<const BuiltinInfo> builtin_table() { return kBuiltins; }

const BuiltinInfo* find_builtin(std::string_view name) {
  auto it = std::find_if(kBuiltins.begin(), kBuiltins.end(),
                         [&](const BuiltinInfo& b) { return b.name == name; });
  return it == kBuiltins.end() ? nullptr : &*it;
}

bool is_unsupported_builtin(std::string_view name) {
  return std::find(kUnsupported.begin(), kUnsupported.end(), name) != kUnsupported.end();
}

}  // namespace bstkit
