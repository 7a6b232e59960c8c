#include "cli.hpp"

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "bstkit/aux_io.hpp"
#include "bstkit/bib_database.hpp"
#include "bstkit/bst_lang.hpp"
#include "bstkit/bst_lint.hpp"
#include "bstkit/bst_vm.hpp"
#include "bstkit/latex_cite_pass.hpp"

namespace bstkit::cli {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path with_ext(const std::string& base, std::string_view ext) {
  return fs::path(base + std::string(ext));
}

// The base's own directory first, then the flag directory.
std::vector<fs::path> search_dirs(const CliConfig& cfg, const std::optional<fs::path>& extra) {
  fs::path dir = fs::path(cfg.base).parent_path();
  std::vector<fs::path> dirs{dir.empty() ? fs::path(".") : dir};
  if (extra) dirs.push_back(*extra);
  return dirs;
}

std::optional<fs::path> locate(const std::string& file, const std::vector<fs::path>& dirs) {
  for (const auto& d : dirs) {
    fs::path p = d / file;
    std::error_code ec;
    if (fs::is_regular_file(p, ec)) return p;
  }
  return std::nullopt;
}

std::string describe_dirs(const std::vector<fs::path>& dirs) {
  std::string out;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (i > 0) out += ", ";
    out += dirs[i].string();
  }
  return out;
}

std::string base_name(const CliConfig& cfg) { return fs::path(cfg.base).filename().string(); }

struct LatexOutcome {
  int code = exit_ok;
  PassResult pass;
};

LatexOutcome latex_once(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  LatexOutcome outcome;
  const fs::path tex_path = with_ext(cfg.base, ".tex");
  auto tex_text = read_file(tex_path);
  if (!tex_text) {
    err << "bstkit: cannot read " << tex_path.string() << "\n";
    outcome.code = exit_error;
    return outcome;
  }
  try {
    TexScan scan = scan_tex(*tex_text);
    for (const auto& d : scan.diagnostics) err << tex_path.string() << ": " << to_string(d) << "\n";

    std::optional<AuxFile> old_aux;
    const fs::path aux_path = with_ext(cfg.base, ".aux");
    if (auto aux_text = read_file(aux_path)) old_aux = parse_aux(*aux_text);

    PassOptions options;
    options.base_name = base_name(cfg);
    options.bbl_text = read_file(with_ext(cfg.base, ".bbl"));

    outcome.pass = run_pass(scan, old_aux, options);
    write_file_atomic(aux_path, write_aux(outcome.pass.new_aux));
    write_file_atomic(with_ext(cfg.base, ".rendered.txt"), outcome.pass.rendered);
    for (const auto& w : outcome.pass.warnings) err << "LaTeX Warning: " << w << "\n";
    out << "latexpass " << base_name(cfg) << ": " << scan.cites.size() << " citations, "
        << outcome.pass.undefined << " undefined"
        << (outcome.pass.labels_changed ? ", labels changed (rerun)" : ", labels stable") << "\n";
  } catch (const ParseError& e) {
    err << tex_path.string() << ":" << e.line() << ": error: " << e.what() << "\n";
    outcome.code = exit_error;
  }
  return outcome;
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
    o.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!o) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_bibtex(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path aux_path = with_ext(cfg.base, ".aux");
  auto aux_text = read_file(aux_path);
  if (!aux_text) {
    err << "bstkit: cannot read aux file " << aux_path.string() << "\n";
    return exit_error;
  }
  AuxFile aux;
  try {
    aux = parse_aux(*aux_text);
  } catch (const ParseError& e) {
    err << aux_path.string() << ":" << e.line() << ": error: " << e.what() << "\n";
    return exit_error;
  }
  if (!aux.style) {
    err << "bstkit: " << aux_path.string() << " has no \\bibstyle command\n";
    return exit_error;
  }
  if (aux.data.empty()) {
    err << "bstkit: " << aux_path.string() << " has no \\bibdata command\n";
    return exit_error;
  }

  const auto style_dirs = search_dirs(cfg, cfg.style_dir);
  const std::string style_file = *aux.style + ".bst";
  auto style_path = locate(style_file, style_dirs);
  if (!style_path) {
    err << "bstkit: style file " << style_file << " not found (searched " << describe_dirs(style_dirs) << ")\n";
    return exit_error;
  }

  std::vector<Diagnostic> load_diags;
  auto bst = parse_bst(*read_file(*style_path), style_path->string());
  load_diags.insert(load_diags.end(), bst.diagnostics.begin(), bst.diagnostics.end());

  const auto bib_dirs = search_dirs(cfg, cfg.bib_dir);
  std::vector<Database> dbs;
  for (const auto& name : aux.data) {
    const std::string bib_file = name + ".bib";
    auto bib_path = locate(bib_file, bib_dirs);
    if (!bib_path) {
      err << "bstkit: database file " << bib_file << " not found (searched " << describe_dirs(bib_dirs) << ")\n";
      return exit_error;
    }
    auto parsed = parse_bib(*read_file(*bib_path), bib_path->string());
    load_diags.insert(load_diags.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
    dbs.push_back(std::move(parsed.db));
  }

  BlgLog blg;
  for (const auto& d : load_diags) {
    err << to_string(d) << "\n";
    if (d.severity == Severity::warning) {
      blg.log_warning(to_string(d));
    } else {
      blg.log_error(to_string(d));
    }
  }

  std::size_t warnings = count(load_diags, Severity::warning);
  std::size_t errors = count(load_diags, Severity::error);
  std::size_t entries = 0;
  if (!has_errors(bst.diagnostics)) {
    RunResult result = run(bst.program, aux, dbs);
    for (const auto& r : result.log.records()) {
      if (r.severity == Severity::warning) {
        blg.log_warning(r.message);
        err << "Warning--" << r.message << "\n";
      } else {
        blg.log_error(r.message);
        err << "error: " << r.message << "\n";
      }
    }
    warnings += result.log.warning_count();
    errors += result.log.error_count();
    entries = result.entry_order.size();
    if (errors == 0) write_file_atomic(with_ext(cfg.base, ".bbl"), result.bbl);
  }
  write_file_atomic(with_ext(cfg.base, ".blg"), blg.render());

  out << "bibtex " << base_name(cfg) << ": " << entries << " entries, " << warnings << " warnings, "
      << errors << " errors\n";
  if (errors > 0) return exit_error;
  if (warnings > 0 && cfg.strict) return exit_warnings;
  return exit_ok;
}

int cmd_latexpass(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return latex_once(cfg, out, err).code;
}

int cmd_pipeline(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path tex_path = with_ext(cfg.base, ".tex");
  auto tex_text = read_file(tex_path);
  if (!tex_text) {
    err << "bstkit: cannot read " << tex_path.string() << "\n";
    return exit_error;
  }
  try {
    if (!scan_tex(*tex_text).style) {
      err << "bstkit: " << tex_path.string() << ": no style declared (missing \\bibliographystyle)\n";
      return exit_error;
    }
  } catch (const ParseError& e) {
    err << tex_path.string() << ":" << e.line() << ": error: " << e.what() << "\n";
    return exit_error;
  }

  if (latex_once(cfg, out, err).code != exit_ok) return exit_error;
  const int bib = cmd_bibtex(cfg, out, err);
  if (bib == exit_error) return exit_error;

  for (int pass = 1; pass <= cfg.max_passes; ++pass) {
    LatexOutcome o = latex_once(cfg, out, err);
    if (o.code != exit_ok) return exit_error;
    if (!o.pass.labels_changed) return bib;
  }
  err << "bstkit: labels did not converge after " << cfg.max_passes << " LaTeX passes\n";
  return exit_error;
}

int cmd_lint(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  fs::path path = with_ext(cfg.base, ".bst");
  auto text = read_file(path);
  if (!text && cfg.style_dir) {
    path = *cfg.style_dir / path.filename();
    text = read_file(path);
  }
  if (!text) {
    err << "bstkit: cannot read style " << with_ext(cfg.base, ".bst").string() << "\n";
    return exit_error;
  }
  auto parsed = parse_bst(*text, path.string());
  bool fatal = false;
  for (const auto& d : parsed.diagnostics) {
    if (d.code == bst_code::undefined_target) continue;  // reported as a finding below
    err << to_string(d) << "\n";
    fatal = true;
  }
  if (fatal) return exit_error;

  auto findings = lint(parsed.program, parsed.diagnostics);
  for (const auto& f : findings) out << path.string() << ":" << f.line << ": " << f.message << "\n";
  out << "lint " << path.filename().string() << ": " << findings.size() << " findings\n";
  return findings.empty() ? exit_ok : exit_warnings;
}

int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::bibtex: return cmd_bibtex(cfg, out, err);
      case Subcommand::latexpass: return cmd_latexpass(cfg, out, err);
      case Subcommand::pipeline: return cmd_pipeline(cfg, out, err);
      case Subcommand::lint: return cmd_lint(cfg, out, err);
    }
  } catch (const std::exception& e) {
    err << "bstkit: " << e.what() << "\n";
  }
  return exit_error;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"BibTeX-style bibliography toolchain", "bstkit"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string style_dir;
  std::string bib_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("BASE", cfg.base, "file base name without extension")->required();
    sub->add_option("--style-dir", style_dir, "extra directory searched for .bst files");
    sub->add_option("--bib-dir", bib_dir, "extra directory searched for .bib files");
    sub->add_option("--max-passes", cfg.max_passes, "LaTeX pass limit for the pipeline")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--strict", cfg.strict, "treat warnings as failures");
  };
  auto* bibtex = app.add_subcommand("bibtex", "run a style over <BASE>.aux, write .bbl and .blg");
  auto* latexpass = app.add_subcommand("latexpass", "one LaTeX citation pass over <BASE>.tex");
  auto* pipeline = app.add_subcommand("pipeline", "latexpass, bibtex, then latexpass until stable");
  auto* lint_cmd = app.add_subcommand("lint", "static checks on <BASE>.bst");
  for (auto* sub : {bibtex, latexpass, pipeline, lint_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_error;
  }

  if (bibtex->parsed()) cfg.subcommand = Subcommand::bibtex;
  else if (latexpass->parsed()) cfg.subcommand = Subcommand::latexpass;
  else if (pipeline->parsed()) cfg.subcommand = Subcommand::pipeline;
  else cfg.subcommand = Subcommand::lint;
  if (!style_dir.empty()) cfg.style_dir = style_dir;
  if (!bib_dir.empty()) cfg.bib_dir = bib_dir;
  if (cfg.base.empty()) {
    err << "bstkit: BASE must not be empty\n";
    return exit_error;
  }
  return dispatch(cfg, out, err);
}

}  // namespace bstkit::cli
