#pragma once

// Flat, typed key-value configuration with [section] headers and strict
// parsing: every key must be consumed by the run that loads it, unknown keys
// are an error. The same format is written back as the run manifest.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/errors.hpp"

namespace driftlab {

class KeyValues {
 public:
  static KeyValues parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValues parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  // Required getters throw ConfigError when the key is missing; all getters
  // mark the key as consumed.
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  /// Comma-separated list of reals.
  std::vector<double> get_double_list(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set_double(const std::string& section, const std::string& key, double value);

  /// "section.key=value" (used for command-line overrides).
  void apply_override(const std::string& assignment);

  /// Throws ConfigError listing keys that were never consumed.
  void ensure_consumed() const;

  /// Mark every key in a section consumed (for sections meant for another
  /// subcommand of the same config).
  void consume_section(const std::string& section) const;

  std::string serialize() const;

 private:
  struct Entry {
    std::string section, key, value;
    mutable bool consumed = false;
  };
  const Entry* find(const std::string& section, const std::string& key) const;
  std::vector<Entry> entries_;
  std::string origin_ = "<empty>";
};

}  // namespace driftlab
