#pragma once

// Named experiment presets. Each preset is produced as a config JSON document
// and goes through the same parser as user config files, so command-line
// overrides and files compose identically.

#include <string>
#include <vector>

#include "gpimc/config_io.hpp"

namespace gpimc {

struct PresetInfo {
    std::string name;
    std::string summary;
};

std::vector<PresetInfo> list_presets();

// throws ConfigError for unknown names
Json preset_config_json(const std::string& name);

SimulationConfig preset_config(const std::string& name);

}  // namespace gpimc
