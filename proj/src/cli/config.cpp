#include "rsw/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rsw/error.hpp"

namespace rsw::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError("key '" + key + "': expected a real number, got '" + text + "'");
  return v;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(number) + ": empty key");
    if (c.entries_.count(key))
      throw ConfigError(origin + ":" + std::to_string(number) + ": duplicate key '" + key + "'");
    c.entries_[key] = value;
    c.lines_[key] = number;
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Config c = parse(ss.str(), path.string());
  c.base_dir_ = path.parent_path();
  return c;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  consumed_.insert(key);
  return it->second;
}

std::string Config::require(const std::string& key) const {
  auto v = get(key);
  if (!v) throw ConfigError("missing required key '" + key + "'");
  return *v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v, key) : fallback;
}

double Config::require_double(const std::string& key) const { return parse_double(require(key), key); }

long long Config::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v->c_str(), &end, 10);
  if (v->empty() || end != v->c_str() + v->size() || errno == ERANGE)
    throw ConfigError("key '" + key + "': expected an integer, got '" + *v + "'");
  return n;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
  if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + *v + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  const auto v = get(key);
  if (!v) return out;
  for (const auto& item : split_commas(*v)) out.push_back(parse_double(item, key));
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  const auto v = get(key);
  return v ? split_commas(*v) : std::vector<std::string>{};
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

void Config::reject_unknown() const {
  for (const auto& [k, v] : entries_)
    if (!consumed_.count(k))
      throw ConfigError(origin_ + ":" + std::to_string(lines_.at(k)) + ": unknown key '" + k + "'");
}

}  // namespace rsw::cli
