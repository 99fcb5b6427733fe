#pragma once

#include <string>
#include <vector>

#include "lieavg/config.hpp"

namespace lieavg {

struct Preset {
  std::string name;
  std::string description;
  Config config;            // system plus recommended x0, t_final, dt
  std::string closed_form;  // known LBS closed form, empty when none
};

/// example1..example4, example3_baseline, example4_baseline.
Preset build_preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace lieavg
