#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rim/brane.hpp"
#include "rim/canonical_lagrangian.hpp"
#include "rim/geometry.hpp"
#include "rim/worldline.hpp"

namespace rim {

struct ConfigEntry {
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::map<std::string, ConfigEntry> entries;
};

/// Parsed run configuration.
///
///   # comment
///   [metric]
///   kind = minkowski
///   dim = 4
///   [tensor.3]
///   coupling = 0.5
///   S(0,1,2) = 1.0
///
/// Keys are checked against a per-section whitelist and every cross-section
/// dimension is validated at parse time. Errors are ConfigError carrying the
/// offending key and line.
class RunConfig {
 public:
  static RunConfig parse(std::string_view text);
  static RunConfig empty() { return parse(""); }

  bool has(const std::string& section) const;
  const ConfigSection& section(const std::string& name) const;
  const std::map<std::string, ConfigSection>& sections() const noexcept { return sections_; }

  std::string string(const std::string& section, const std::string& key,
                     std::optional<std::string> fallback = std::nullopt) const;
  double number(const std::string& section, const std::string& key,
                std::optional<double> fallback = std::nullopt) const;
  int integer(const std::string& section, const std::string& key,
              std::optional<int> fallback = std::nullopt) const;
  Vector vector(const std::string& section, const std::string& key,
                std::optional<Vector> fallback = std::nullopt) const;
  int line_of(const std::string& section, const std::string& key) const;

  std::uint64_t seed() const noexcept { return seed_; }
  void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  /// FNV-1a 64 of the config text, hex.
  const std::string& digest() const noexcept { return digest_; }

  /// Metric dimension, 4 when no [metric] section is given.
  int dim() const;
  MetricField metric() const;
  LagrangianSpec lagrangian() const;
  Gauge gauge() const;

 private:
  void validate();
  void collect_tensors();

  std::map<std::string, ConfigSection> sections_;
  std::vector<std::string> warnings_;
  std::map<int, SymmetricTensorField> tensors_;
  std::uint64_t seed_ = 0;
  std::string digest_;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::string fnv1a_hex(std::string_view text);

}  // namespace rim
