#pragma once

// Versioned JSON checkpoints: full sampler state (coefficients, centers,
// widths, RNG state, counters) plus the recorded series, sufficient to resume
// a run bit-for-bit when the checkpoint falls on a cache-resync boundary.

#include <stdexcept>
#include <string>
#include <vector>

#include "gpimc/config_io.hpp"
#include "gpimc/sampler.hpp"

namespace gpimc {

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kCheckpointSchemaVersion = 1;

struct CheckpointData {
    SimulationConfig config;
    std::vector<ChainResult> chains;
};

Json checkpoint_to_json(const SimulationConfig& sim, const std::vector<ChainResult>& chains);
CheckpointData checkpoint_from_json(const Json& j);

void save_checkpoint(const std::string& path, const SimulationConfig& sim,
                     const std::vector<ChainResult>& chains);
CheckpointData load_checkpoint(const std::string& path);

}  // namespace gpimc
