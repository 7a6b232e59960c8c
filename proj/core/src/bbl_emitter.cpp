#include "bstkit/bbl_emitter.hpp"

#include <algorithm>

namespace bstkit {

void BblDocument::flush_line() {
  lines_.push_back(std::move(pending_));
  pending_.clear();
}

std::string BblDocument::finalize() {
  if (!pending_.empty()) flush_line();
  std::string out;
  for (const auto& line : lines_) {
    out += line;
    out += '\n';
  }
  return out;
}

void BlgLog::log_warning(std::string message) {
  records_.push_back({Severity::warning, std::move(message)});
}

void BlgLog::log_error(std::string message) {
  records_.push_back({Severity::error, std::move(message)});
}

std::size_t BlgLog::warning_count() const {
  return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const LogRecord& r) {
    return r.severity == Severity::warning;
  }));
}

std::size_t BlgLog::error_count() const { return records_.size() - warning_count(); }

std::string BlgLog::render() const {
  std::string out;
  for (const auto& r : records_) {
    if (r.severity == Severity::warning) out += "Warning--";
    out += r.message;
    out += '\n';
  }
  return out;
}

}  // namespace bstkit
