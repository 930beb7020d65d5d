#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rydgate/core.hpp"

namespace rydgate {

/// Raw key-value configuration, keyed by "section.key".
class ConfigDocument {
 public:
  static ConfigDocument parse(std::istream& in, const std::string& source = "<stream>");
  static ConfigDocument parse_string(const std::string& text);
  static ConfigDocument load(const std::filesystem::path& path);

  /// Sets "section.key". Unknown keys are rejected; the aliases
  /// "profiles.<key>" set the key on both profiles.
  void set(const std::string& key_path, const std::string& value);
  /// Parses "section.key=value".
  void apply_override(const std::string& assignment);
  void erase(const std::string& key_path);

  std::optional<std::string> get(const std::string& key_path) const;
  bool contains(const std::string& key_path) const { return entries_.count(key_path) != 0; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  /// INI rendering, sections in schema order.
  std::string to_ini() const;

 private:
  std::map<std::string, std::string> entries_;
};

struct ConfigKey {
  std::string path;
  std::string default_value;  // empty: no default
  bool required = false;
  std::string description;
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_schema();
bool is_known_key(std::string_view key_path);
/// Expands the "profiles." alias; other paths are returned unchanged.
std::vector<std::string> expand_key_path(const std::string& key_path);

struct ConfigResult {
  GateConfig config;
  std::vector<std::string> warnings;
};

ConfigResult validate_config(const ConfigDocument& doc);

/// Fully resolved document (defaults filled, calibration applied) for
/// display and manifests.
ConfigDocument resolved_document(const GateConfig& config);

/// Scalar grammar: a decimal number, or [±][number*]pi[/number].
double parse_scalar(std::string_view text);
/// "x, y, z" optionally bracketed; a single scalar d yields (d, 0, 0).
Vec3 parse_vector(std::string_view text);

}  // namespace rydgate
