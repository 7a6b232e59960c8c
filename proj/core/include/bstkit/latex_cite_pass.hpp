#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bstkit/aux_io.hpp"
#include "bstkit/diagnostics.hpp"

namespace bstkit {

// One `\cite{a,b}` occurrence; [begin, end) spans the whole command.
struct CiteSite {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> keys;
  int line = 0;
};

struct TexScan {
  std::string text;
  std::vector<CiteSite> sites;
  std::vector<std::string> cites;  // flattened keys of all sites
  std::optional<std::string> style;
  std::vector<std::string> data;
  bool has_bibliography_env = false;
  std::vector<std::string> inline_bib;
  std::vector<Diagnostic> diagnostics;

  bool external_mode() const { return style.has_value() || !data.empty(); }
};

// Throws ParseError when a recognized command has unbalanced braces.
TexScan scan_tex(std::string_view text);

struct PassOptions {
  std::string base_name = "texput";
  // Contents of <base>.bbl, if any. In external mode its \bibitem order
  // supplies the labels, as LaTeX would learn them by reading the file.
  std::optional<std::string> bbl_text;
};

struct PassResult {
  std::string rendered;
  AuxFile new_aux;
  std::vector<std::string> warnings;
  bool labels_changed = false;
  std::size_t undefined = 0;
};

PassResult run_pass(const TexScan& tex, const std::optional<AuxFile>& old_aux,
                    const PassOptions& options = {});

struct FixpointResult {
  std::vector<PassResult> passes;
  int passes_used = 0;
  bool converged = false;
};

// Throws std::invalid_argument if max_passes < 1.
FixpointResult fixpoint(const TexScan& tex, std::optional<AuxFile> initial_aux,
                        int max_passes, const PassOptions& options = {});

inline constexpr std::string_view rerun_warning =
    "Label(s) may have changed. Rerun to get cross-references right.";

}  // namespace bstkit
