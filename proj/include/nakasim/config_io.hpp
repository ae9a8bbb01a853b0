// Scenario files: YAML with nested sections. The schema is in docs/config.md.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nakasim/model.hpp"

namespace nakasim {

/// Parses and validates a scenario. Errors carry the 1-based line of the
/// offending key when it can be located.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Full, self-contained dump (no preset key). parse_scenario(dump_scenario(c)) == c.
std::string dump_scenario(const ScenarioConfig& cfg);

}  // namespace nakasim
