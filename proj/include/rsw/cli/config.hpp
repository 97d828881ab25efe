#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rsw::cli {

/// Flat `key = value` configuration. Keys are dotted (grid.n, stepper.dt);
/// '#' starts a comment; blank lines are ignored.
///
/// Every getter records the key as consumed so that unknown (misspelt) keys
/// can be reported after the scenario has been assembled.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  /// Raw value; throws ConfigError naming the key when it is absent.
  std::string require(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals; empty when the key is absent.
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// Keys starting with `prefix`.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  /// Throws ConfigError naming the first key never read.
  void reject_unknown() const;

  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }
  /// Directory relative paths in the file are resolved against.
  const std::filesystem::path& base_dir() const noexcept { return base_dir_; }

 private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
  std::string origin_;
  std::filesystem::path base_dir_;
  mutable std::set<std::string> consumed_;
};

double parse_double(const std::string& text, const std::string& key);

}  // namespace rsw::cli
