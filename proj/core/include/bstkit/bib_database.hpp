#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bstkit/diagnostics.hpp"

namespace bstkit {

// One `@type{key, name = value, ...}` block. Field names and the entry type
// are stored lowercase; the key keeps its original case.
struct Entry {
  std::string key;
  std::string entry_type;
  std::vector<std::pair<std::string, std::string>> fields;
  int line = 0;

  // nullptr when the field is absent.
  const std::string* find(std::string_view name) const;

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.key == b.key && a.entry_type == b.entry_type &&
           a.fields == b.fields;
  }
};

class Database {
 public:
  // Returns false (and leaves the database unchanged) if the key exists.
  bool add(Entry entry);

  // Exact, case-sensitive key match.
  const Entry* lookup(std::string_view key) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct BibParseResult {
  Database db;
  std::vector<Diagnostic> diagnostics;
};

BibParseResult parse_bib(std::string_view text, std::string_view source_name);

inline const Entry* lookup(const Database& db, std::string_view key) {
  return db.lookup(key);
}

// std::nullopt is the missing-field marker. `name` is lowercased here.
std::optional<std::string> get_field(const Entry& entry, std::string_view name);

}  // namespace bstkit
