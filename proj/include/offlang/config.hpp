#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace offlang {

// Flat `key=value` file with dotted keys. Blank lines and lines starting with
// '#' are skipped; whitespace around keys and values is trimmed.
class Config {
 public:
  Config() = default;
  explicit Config(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  static Config parse(std::istream& in);
  static Config parse_file(const std::string& path);

  bool has(std::string_view key) const { return values_.find(std::string(key)) != values_.end(); }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

  // Typed getters throw ValidationError naming the key on malformed values.
  std::optional<std::string> get(std::string_view key) const;
  std::string get_or(std::string_view key, std::string fallback) const;
  std::string require(std::string_view key) const;
  std::optional<long long> get_int(std::string_view key) const;
  std::optional<std::uint64_t> get_u64(std::string_view key) const;
  std::optional<double> get_double(std::string_view key) const;
  std::optional<bool> get_bool(std::string_view key) const;

  // Keys below `prefix.` with the prefix stripped, e.g. "add" -> {"OTH": "300"}.
  std::map<std::string, std::string> section(std::string_view prefix) const;

  // Throws ValidationError on keys that match neither an exact name nor a
  // `prefix.` entry ending in '.'.
  void reject_unknown(const std::vector<std::string_view>& allowed) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }
  std::string serialize() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace offlang
