#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bstkit/bst_lang.hpp"

namespace bstkit {

struct LintFinding {
  std::string message;
  int line = 0;
};

// Net stack effect of a body, or nullopt when it cannot be determined
// statically (unknown identifiers, branches with differing effects, ...).
std::optional<int> stack_effect(const Program& program, const TokenList& body);

// Static checks: undefined EXECUTE/ITERATE targets, unresolvable identifiers,
// unused ENTRY fields, and nonzero stack effect of executed functions.
std::vector<LintFinding> lint(const Program& program,
                              const std::vector<Diagnostic>& parse_diagnostics = {});

}  // namespace bstkit
