#pragma once

#include <iosfwd>
#include <string>

#include "pumptrack/ocp.hpp"
#include "pumptrack/simulate.hpp"

namespace pumptrack {

/// Scenario plus solver options, as read from / written to the flat
/// key-value config format (see README for the grammar).
struct ScenarioConfig {
  Scenario scenario{};
  SolverOptions solver{};
};

/// The shipped defaults (see README for the parameter table).
ScenarioConfig default_config();

ScenarioConfig parse_config(std::istream& is, const std::string& origin);
ScenarioConfig load_config(const std::string& path);

/// Canonical textual form; parse(serialize(c)) reproduces c.
std::string serialize_config(const ScenarioConfig& c);
void save_config(const ScenarioConfig& c, const std::string& path);

/// Apply extracted l/u bounds to a config (the `bounds --write-config`
/// merge). Only the four bound keys change.
void merge_bounds(ScenarioConfig& c, const Bounds& b);

}  // namespace pumptrack
