#include "bstkit/latex_cite_pass.hpp"

#include <cctype>
#include <stdexcept>

#include "bstkit/text.hpp"

namespace bstkit {

namespace {

class TexScanner {
 public:
  explicit TexScanner(std::string_view text) : text_(text) { scan_.text = std::string(text); }

  TexScan run() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\\') {
        command();
      } else {
        advance();
      }
    }
    if (!scan_.inline_bib.empty() && !scan_.data.empty()) {
      scan_.diagnostics.push_back(Diagnostic{
          Severity::warning,
          "document has both a thebibliography environment and \\bibliography; "
          "using \\bibliography",
          0, {}, {}});
    }
    return std::move(scan_);
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void command() {
    const std::size_t start = pos_;
    const int line = line_;
    ++pos_;
    const std::size_t name_start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(name_start, pos_ - name_start);
    if (name.empty()) {
      // Control symbol such as \% or \'; the symbol itself is not special.
      if (pos_ < text_.size()) advance();
      return;
    }
    if (name == "cite") {
      if (peek() == '*') ++pos_;
      skip_optional();
      CiteSite site;
      site.begin = start;
      site.line = line;
      site.keys = split_keys(group(name, line));
      site.end = pos_;
      for (const auto& k : site.keys) scan_.cites.push_back(k);
      scan_.sites.push_back(std::move(site));
    } else if (name == "bibitem") {
      skip_optional();
      scan_.inline_bib.emplace_back(text::trim(group(name, line)));
    } else if (name == "bibliographystyle") {
      scan_.style = std::string(text::trim(group(name, line)));
    } else if (name == "bibliography") {
      for (auto& d : split_keys(group(name, line))) scan_.data.push_back(std::move(d));
    } else if (name == "begin") {
      skip_spaces();
      if (peek() != '{') return;
      if (text::trim(group(name, line)) == "thebibliography") {
        scan_.has_bibliography_env = true;
        skip_spaces();
        if (peek() == '{') group(name, line);
      }
    }
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_spaces() {
    while (pos_ < text_.size() && text::is_space(text_[pos_])) advance();
  }

  void skip_optional() {
    skip_spaces();
    if (peek() != '[') return;
    while (pos_ < text_.size() && text_[pos_] != ']') advance();
    if (pos_ < text_.size()) ++pos_;
  }

  std::string group(std::string_view command, int line) {
    skip_spaces();
    if (peek() != '{') {
      throw ParseError("\\" + std::string(command) + " without a braced argument", line);
    }
    ++pos_;
    const std::size_t b = pos_;
    int depth = 1;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      advance();
      if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        return std::string(text_.substr(b, pos_ - 1 - b));
      }
    }
    throw ParseError("unbalanced braces in \\" + std::string(command), line);
  }

  static std::vector<std::string> split_keys(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
      std::size_t comma = s.find(',', start);
      if (comma == std::string_view::npos) comma = s.size();
      std::string_view k = text::trim(s.substr(start, comma - start));
      if (!k.empty()) out.emplace_back(k);
      start = comma + 1;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  TexScan scan_;
};

void number_labels(const std::vector<std::string>& keys, AuxFile& aux,
                   std::vector<std::string>& warnings) {
  int n = 0;
  for (const auto& key : keys) {
    if (aux.bibcite(key) != nullptr) {
      warnings.push_back("Label `" + key + "' multiply defined.");
      continue;
    }
    aux.set_bibcite(key, std::to_string(++n));
  }
}

}  // namespace

TexScan scan_tex(std::string_view text) { return TexScanner(text).run(); }

PassResult run_pass(const TexScan& tex, const std::optional<AuxFile>& old_aux,
                    const PassOptions& options) {
  PassResult r;
  if (!old_aux) r.warnings.push_back("No file " + options.base_name + ".aux.");
  const AuxFile previous = old_aux.value_or(AuxFile{});

  std::size_t copied = 0;
  for (const CiteSite& site : tex.sites) {
    r.rendered.append(tex.text, copied, site.begin - copied);
    r.rendered += '[';
    for (std::size_t i = 0; i < site.keys.size(); ++i) {
      if (i > 0) r.rendered += ',';
      const std::string& key = site.keys[i];
      if (const std::string* label = previous.bibcite(key)) {
        r.rendered += *label;
      } else {
        r.rendered += '?';
        ++r.undefined;
        r.warnings.push_back("Citation `" + key + "' on page 1 undefined on input line " +
                             std::to_string(site.line));
      }
    }
    r.rendered += ']';
    copied = site.end;
  }
  r.rendered.append(tex.text, copied, std::string::npos);

  r.new_aux.citations = tex.cites;
  if (tex.external_mode()) {
    r.new_aux.style = tex.style;
    r.new_aux.data = tex.data;
    if (options.bbl_text) {
      number_labels(scan_tex(*options.bbl_text).inline_bib, r.new_aux, r.warnings);
    }
  } else {
    number_labels(tex.inline_bib, r.new_aux, r.warnings);
  }

  r.labels_changed = !same_bibcites(previous, r.new_aux);
  if (r.labels_changed) r.warnings.emplace_back(rerun_warning);
  return r;
}

FixpointResult fixpoint(const TexScan& tex, std::optional<AuxFile> initial_aux, int max_passes,
                        const PassOptions& options) {
  if (max_passes < 1) throw std::invalid_argument("max_passes must be at least 1");
  FixpointResult out;
  std::optional<AuxFile> aux = std::move(initial_aux);
  while (out.passes_used < max_passes) {
    PassResult pass = run_pass(tex, aux, options);
    ++out.passes_used;
    aux = pass.new_aux;
    const bool changed = pass.labels_changed;
    out.passes.push_back(std::move(pass));
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace bstkit
