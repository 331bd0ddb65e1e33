#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vprkit/core/error.h"

namespace vprkit::cli {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::size_t column)
      : Error("config " + std::to_string(line) + ":" + std::to_string(column) +
              ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Line-oriented "key = value" text with [section] headers and '#' comments.
// Keys before the first header belong to the section "".
//
//   [dataset]
//   kind = synth      # synth | images | descriptors
//
// Values are typed on access; errors point at the value's line and column.
class Config {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    std::size_t column = 0;
  };

  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  // Overrides or adds a value (used for command-line flags).
  void set(const std::string& section, const std::string& key,
           const std::string& value);

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  long get_int(const std::string& section, const std::string& key,
               long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<long> get_int_list(const std::string& section,
                                 const std::string& key,
                                 const std::vector<long>& fallback) const;

  // Error located at an entry.
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

  // Entries never read through a getter; used to reject typos.
  std::vector<std::string> unused_keys() const;
  void reject_unused() const;

  const std::filesystem::path& base_dir() const { return base_dir_; }

 private:
  const Entry* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
  mutable std::set<std::pair<std::string, std::string>> used_;
  std::filesystem::path base_dir_;
};

}  // namespace vprkit::cli
