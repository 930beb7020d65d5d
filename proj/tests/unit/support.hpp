#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "rydgate/config.hpp"
#include "rydgate/harness.hpp"

namespace rydgate::test {

/// Working point (d = 21, w∥ = 3, w⊥ = 8, π in 5 μs) with overrides.
inline GateConfig working_point(std::initializer_list<std::pair<const char*, std::string>> overrides = {}) {
  ConfigDocument doc = harness::default_document();
  for (const auto& [key, value] : overrides) doc.set(key, value);
  return validate_config(doc).config;
}

/// Configuration where every width is small compared with the separation.
inline GateConfig narrow_clouds(double w, std::initializer_list<std::pair<const char*, std::string>> overrides = {}) {
  ConfigDocument doc = harness::default_document();
  doc.set("profiles.w_par", std::to_string(w));
  doc.set("profiles.w_perp", std::to_string(w));
  for (const auto& [key, value] : overrides) doc.set(key, value);
  return validate_config(doc).config;
}

}  // namespace rydgate::test
