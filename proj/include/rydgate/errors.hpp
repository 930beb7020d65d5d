#pragma once

#include <stdexcept>
#include <string>

namespace rydgate {

/// Invalid or incomplete configuration. `key_path()` names the offending
/// entry as "section.key" when one is known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& message)
      : std::runtime_error(key_path.empty() ? message : key_path + ": " + message),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

/// A physically or numerically ill-posed evaluation (overlapping clouds,
/// undefined time, degenerate maps, ...).
class PhysicsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rydgate
