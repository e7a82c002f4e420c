#pragma once

// Run configuration: a flat `key = value` text format with a fixed schema.
// Every key has a default except `topology`. Grids are written either as
// `start:step:stop` (inclusive) or as a comma-separated list.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "topopump/dynamics.hpp"
#include "topopump/experiments.hpp"
#include "topopump/lattice.hpp"
#include "topopump/protocol.hpp"

namespace topopump {

struct ConfigKey {
  std::string name;
  std::string default_value;  // empty: unset
  std::string description;
};

/// The documented schema, in presentation order.
const std::vector<ConfigKey>& config_schema();

/// Parses `start:step:stop` or `a,b,c`. Throws ConfigError naming `field`.
std::vector<double> parse_grid(const std::string& field, const std::string& text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

class RunConfig {
 public:
  /// Schema defaults (topology unset).
  RunConfig();

  /// Reads `key = value` lines onto the defaults. `#` starts a comment.
  static RunConfig parse(std::string_view text, const std::string& source = "<config>");
  static RunConfig load(const std::filesystem::path& path);

  /// Sets a schema key; unknown keys are rejected.
  void set(const std::string& key, const std::string& value);
  /// Applies a `key=value` override.
  void apply_override(const std::string& assignment);

  /// Canonical text form (schema order, every key), parseable by parse().
  std::string serialize() const;
  /// Hash of serialize() without the output directory, so relocating a run
  /// does not change its provenance.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  const std::map<std::string, std::string>& values() const { return values_; }
  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::uint64_t seed() const;
  /// Non-empty grid; throws ConfigError naming the key if empty or malformed.
  std::vector<double> grid(const std::string& key) const;
  std::vector<int> int_list(const std::string& key) const;

  /// Checks required fields and value domains; throws ConfigError.
  void validate() const;

  ChainSpec chain() const;
  DriveSchedule schedule() const;
  EvolveOptions evolve_options() const;
  DisorderConfig disorder() const;
  StabilizationSearch search() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace topopump
