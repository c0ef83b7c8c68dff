#ifndef FLOWSIM_SCENARIO_IO_HPP
#define FLOWSIM_SCENARIO_IO_HPP

#include <string>

#include "flowsim/config.hpp"

namespace flowsim {

/// Parses the key/value scenario format documented in the README. Keys may
/// be omitted (the field keeps the value it has in `base`); unknown keys or
/// sections are a hard error (ConfigError, BadField).
ScenarioConfig parse_scenario(const std::string& text, const ScenarioConfig& base = {});

/// Reads and parses a scenario file. Throws ConfigError on I/O failure.
ScenarioConfig load_scenario_file(const std::string& path, const ScenarioConfig& base = {});

/// Serializes every field with full round-trip precision;
/// parse_scenario(serialize_scenario(c)) is field-identical to c.
std::string serialize_scenario(const ScenarioConfig& cfg);

}  // namespace flowsim

#endif  // FLOWSIM_SCENARIO_IO_HPP
