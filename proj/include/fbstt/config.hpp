#pragma once

#include "fbstt/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fbstt {

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { kIo, kSyntax, kConstraint };

  ConfigError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Parses a scenario document. YAML is the primary encoding; a document whose
// first non-blank character is '{' is read as JSON. Omitted keys take the
// ScenarioConfig defaults, unknown keys are rejected, and the result is
// validated.
ScenarioConfig parse_config_text(std::string_view text);

// Same as parse_config_text; the file name is prefixed to error messages.
ScenarioConfig parse_config(const std::filesystem::path& path);

// Fully populated canonical JSON form (sorted keys, shortest round-trip
// numbers). parse_config_text(to_json_string(c)) reproduces c.
std::string to_json_string(const ScenarioConfig& cfg);

// FNV-1a 64 over the canonical JSON form, as 16 hex digits.
std::string config_checksum(const ScenarioConfig& cfg);

// Returns a copy of cfg with one field replaced. key is a dotted path into the
// canonical form (e.g. "smc.lambda"); value is a YAML scalar or flow sequence.
ScenarioConfig with_override(const ScenarioConfig& cfg, std::string_view key, std::string_view value);

std::uint64_t fnv1a64(std::string_view bytes);

Mode parse_mode(std::string_view text);

}  // namespace fbstt
