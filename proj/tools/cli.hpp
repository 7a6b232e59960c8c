#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace bstkit::cli {

enum class Subcommand { bibtex, latexpass, pipeline, lint };

struct CliConfig {
  Subcommand subcommand = Subcommand::bibtex;
  std::string base;  // file name without extension, may include a directory
  std::optional<std::filesystem::path> style_dir;
  std::optional<std::filesystem::path> bib_dir;
  int max_passes = 5;
  bool strict = false;
};

// Exit codes shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_warnings = 1;  // --strict with warnings, or lint findings
inline constexpr int exit_error = 2;

int cmd_bibtex(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_latexpass(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_pipeline(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_lint(const CliConfig& cfg, std::ostream& out, std::ostream& err);

int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv and runs the selected subcommand.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

// Writes via a temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace bstkit::cli
