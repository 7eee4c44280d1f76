#include "offlang/config.hpp"

#include <charconv>
#include <fstream>

#include "offlang/error.hpp"
#include "text_io.hpp"

namespace offlang {

Config Config::parse(std::istream& in) {
  Config cfg;
  std::string line;
  std::size_t number = 0;
  while (detail::read_line(in, line)) {
    ++number;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", number);
    const std::string key(detail::trim(text.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", number);
    if (!cfg.values_.emplace(key, std::string(detail::trim(text.substr(eq + 1)))).second) {
      throw ParseError("duplicate key '" + key + "'", number);
    }
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  return parse(in);
}

std::optional<std::string> Config::get(std::string_view key) const {
  const auto it = values_.find(std::string(key));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_or(std::string_view key, std::string fallback) const {
  auto v = get(key);
  return v ? *v : std::move(fallback);
}

std::string Config::require(std::string_view key) const {
  auto v = get(key);
  if (!v) throw ValidationError("missing required config key '" + std::string(key) + "'");
  return *v;
}

std::optional<long long> Config::get_int(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  long long out = 0;
  if (!detail::parse_int(*v, out)) throw ValidationError("config key '" + std::string(key) + "' is not an integer: " + *v);
  return out;
}

std::optional<std::uint64_t> Config::get_u64(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  std::uint64_t out = 0;
  const auto* end = v->data() + v->size();
  const auto [ptr, ec] = std::from_chars(v->data(), end, out);
  if (v->empty() || ec != std::errc{} || ptr != end) {
    throw ValidationError("config key '" + std::string(key) + "' is not an unsigned integer: " + *v);
  }
  return out;
}

std::optional<double> Config::get_double(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  double out = 0.0;
  if (!detail::parse_double(*v, out)) throw ValidationError("config key '" + std::string(key) + "' is not a number: " + *v);
  return out;
}

std::optional<bool> Config::get_bool(std::string_view key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ValidationError("config key '" + std::string(key) + "' is not a boolean: " + *v);
}

std::map<std::string, std::string> Config::section(std::string_view prefix) const {
  const std::string head = std::string(prefix) + ".";
  std::map<std::string, std::string> out;
  for (auto it = values_.lower_bound(head); it != values_.end() && it->first.starts_with(head); ++it) {
    out.emplace(it->first.substr(head.size()), it->second);
  }
  return out;
}

void Config::reject_unknown(const std::vector<std::string_view>& allowed) const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    bool ok = false;
    for (auto a : allowed) {
      if (a.ends_with('.') ? std::string_view(key).starts_with(a) && key.size() > a.size() : key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw ValidationError("unknown config keys: " + unknown);
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [key, value] : values_) out += key + "=" + value + "\n";
  return out;
}

}  // namespace offlang
