#pragma once

#include <string>
#include <vector>

#include "lieavg/system.hpp"

namespace lieavg {

struct SimulationSpec {
  std::vector<double> x0;
  double t_final = 10.0;
  double dt = 1e-3;
  bool full_state_effort = false;  // state effort over |x|^2 instead of x1^2
};

/// A system description together with its default simulation settings.
struct Config {
  SystemSpec system;
  SimulationSpec simulation;
};

/// JSON text -> Config. Throws ConfigError naming the offending field.
Config parse_config(const std::string& text);
/// Config -> JSON text (two-space indent, trailing newline). Round-trips losslessly.
std::string dump_config(const Config& cfg);

Config load_config(const std::string& path);
void save_config(const Config& cfg, const std::string& path);

}  // namespace lieavg
