#include "vprkit/cli/config.h"

#include <cctype>
#include <sstream>

#include "vprkit/core/io.h"

namespace vprkit::cli {
namespace {

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    if (lead) *lead = s.size();
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  if (lead) *lead = b;
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' &&
        c != '-') {
      return false;
    }
  }
  return true;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::size_t lead = 0;
    const std::string body = trim(line, &lead);
    if (body.empty()) continue;
    const std::size_t col = lead + 1;
    if (body.front() == '[') {
      if (body.back() != ']') {
        throw ConfigError("section header missing ']'", line_no, col);
      }
      section = trim(body.substr(1, body.size() - 2));
      if (!valid_name(section)) {
        throw ConfigError("invalid section name", line_no, col + 1);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value'", line_no, col);
    }
    const std::string key = trim(line.substr(0, eq));
    if (!valid_name(key)) throw ConfigError("invalid key", line_no, col);
    std::size_t value_lead = 0;
    const std::string value = trim(line.substr(eq + 1), &value_lead);
    auto& entries = cfg.sections_[section];
    if (entries.count(key)) {
      throw ConfigError("duplicate key '" + key + "'", line_no, col);
    }
    entries[key] = Entry{value, line_no, eq + 2 + value_lead};
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  Config cfg = parse(read_file(path));
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto e = s->second.find(key);
  if (e == s->second.end()) return nullptr;
  used_.emplace(section, key);
  return &e->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  sections_[section][key] = Entry{value, 0, 0};
}

void Config::fail(const std::string& section, const std::string& key,
                  const std::string& message) const {
  const auto s = sections_.find(section);
  std::size_t line = 0;
  std::size_t col = 0;
  if (s != sections_.end()) {
    if (const auto e = s->second.find(key); e != s->second.end()) {
      line = e->second.line;
      col = e->second.column;
    }
  }
  throw ConfigError("[" + section + "] " + key + ": " + message, line, col);
}

std::string Config::get_string(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    const long v = std::stol(e->value, &used);
    if (used == e->value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(section, key, "expected an integer, got '" + e->value + "'");
}

std::uint64_t Config::get_u64(const std::string& section,
                              const std::string& key,
                              std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    if (!e->value.empty() && e->value[0] != '-') {
      const std::uint64_t v = std::stoull(e->value, &used);
      if (used == e->value.size()) return v;
    }
  } catch (const std::exception&) {
  }
  fail(section, key, "expected an unsigned integer, got '" + e->value + "'");
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(e->value, &used);
    if (used == e->value.size()) return v;
  } catch (const std::exception&) {
  }
  fail(section, key, "expected a number, got '" + e->value + "'");
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  fail(section, key, "expected true/false, got '" + e->value + "'");
}

std::vector<long> Config::get_int_list(const std::string& section,
                                       const std::string& key,
                                       const std::vector<long>& fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::vector<long> out;
  std::string item;
  std::istringstream in(e->value);
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    try {
      std::size_t used = 0;
      out.push_back(std::stol(t, &used));
      if (used != t.size()) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      fail(section, key, "expected a comma separated integer list");
    }
  }
  return out;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!used_.count({section, key})) out.push_back(section + "." + key);
    }
  }
  return out;
}

void Config::reject_unused() const {
  for (const auto& [section, entries] : sections_) {
    for (const auto& [key, entry] : entries) {
      if (!used_.count({section, key})) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]",
                          entry.line, entry.column);
      }
    }
  }
}

}  // namespace vprkit::cli
