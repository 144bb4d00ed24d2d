#pragma once

// JSON <-> SimulationConfig. The schema is strict: unknown keys are rejected
// so typos fail fast. All lengths are in coordinate units; the amplitude
// cutoff keys carry their unit in the name (amplitude_cutoff_q for paths,
// amplitude_cutoff_field or amplitude_cutoff_inv_xi for gauge fields).

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "gpimc/sampler.hpp"

namespace gpimc {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

SimulationConfig parse_config(const Json& j);
Json serialize_config(const SimulationConfig& sim);

SimulationConfig load_config_file(const std::string& path);

}  // namespace gpimc
