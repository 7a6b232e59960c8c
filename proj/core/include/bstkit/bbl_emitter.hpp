#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bstkit/diagnostics.hpp"

namespace bstkit {

// Output side of write$/newline$: text accumulates in a pending buffer and
// becomes a line on flush. No line wrapping is applied.
class BblDocument {
 public:
  void append(std::string_view text) { pending_.append(text); }
  void flush_line();

  // Flushes any residue, then joins lines with LF (trailing LF included).
  std::string finalize();

  const std::vector<std::string>& lines() const noexcept { return lines_; }
  const std::string& pending() const noexcept { return pending_; }

 private:
  std::vector<std::string> lines_;
  std::string pending_;
};

struct LogRecord {
  Severity severity;
  std::string message;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

class BlgLog {
 public:
  void log_warning(std::string message);
  void log_error(std::string message);

  const std::vector<LogRecord>& records() const noexcept { return records_; }
  std::size_t warning_count() const;
  std::size_t error_count() const;

  // One record per line: "Warning--" + body for warnings, bare text for errors.
  std::string render() const;

 private:
  std::vector<LogRecord> records_;
};

}  // namespace bstkit
