#pragma once

// Metropolis sampling of exp(-S) over Gaussian-basis configurations. One
// iteration proposes a uniform bump of a single randomly chosen coefficient;
// centers and widths stay frozen. Chains of an ensemble use independent RNG
// streams derived from (master seed, chain index), so results are identical
// for any worker count.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gpimc/action.hpp"
#include "gpimc/basis.hpp"
#include "gpimc/rng.hpp"

namespace gpimc {

struct ScaleStrategy {
    enum class Mode { Fixed, RandomUniform };
    Mode mode = Mode::Fixed;
    double xi = 1.0;      // Fixed
    double xi_min = 0.0;  // RandomUniform bounds, inclusive lower
    double xi_max = 0.0;

    double minimum() const { return mode == Mode::Fixed ? xi : xi_min; }

    bool operator==(const ScaleStrategy&) const = default;
};

enum class CenterPlacement { UniformGrid, Random };
enum class StartMode { Hot, Cold };

// Random: one uniformly chosen term per step (the default). Sweep: cycle all
// term indices in order, one per step; matches the site-sweep convention of
// the discretized-time oracle.
enum class ProposalOrder { Random, Sweep };

// Rectangular T x R Wilson loops measured on final configurations: for every
// (T, R) pair, loops_per_pair loops at random positions and random spatial
// orientation, all with segment length close to segment_length. time_step is
// the T increment used when extracting V(R) from loop ratios.
struct LoopPlan {
    double segment_length = 0.25;
    double time_step = 0.5;
    std::vector<double> t_extents;
    std::vector<double> r_extents;
    int loops_per_pair = 10;

    bool operator==(const LoopPlan&) const = default;
};

struct MeasurementPlan {
    long interval = 10;  // iterations between series records
    int histogram_bins = 80;
    double histogram_range = 4.0;  // half-range of the coordinate histogram
    int samples_per_path = 500;    // coordinate samples per path (1D models)
    int field_histogram_bins = 48;
    double field_histogram_range = 3.0;
    LoopPlan loops;  // gauge models only

    bool operator==(const MeasurementPlan&) const = default;
};

struct SimulationConfig {
    PeriodicDomain domain;
    PhysicsModel model;
    int terms_per_component = 0;
    CenterPlacement placement = CenterPlacement::UniformGrid;
    std::array<int, kMaxDims> center_grid{};  // per-axis counts for 4D UniformGrid
    ScaleStrategy scale;
    double amplitude_cutoff = 3.0;  // bound for hot-start draw and proposal step
    StartMode start = StartMode::Hot;
    ProposalOrder proposal = ProposalOrder::Random;
    long n_iteration = 0;
    int ensemble_size = 1;
    std::uint64_t rng_seed = 1;
    QuadratureProfile quadrature = QuadratureProfile::Fine;
    double truncation_epsilon = 1e-8;
    long resync_interval = 100000;  // full cache rebuild cadence
    MeasurementPlan measure;

    void validate() const;

    bool operator==(const SimulationConfig&) const = default;
};

struct SeriesEntry {
    long iteration = 0;
    double action = 0.0;
    double derived = 0.0;
};

// Per-chain record of (iteration, S, derived observable); derived is the
// potential average for paths and the Lagrangian density average for fields.
struct ObservableSeries {
    std::string derived_name;
    std::vector<SeriesEntry> entries;

    void append(long iteration, double action, double derived);
};

struct ChainState {
    Configuration config;
    QuadratureGrid grid;
    NodeCache cache;
    Xoshiro256pp rng;
    int chain_index = 0;
    double current_action = 0.0;
    long iteration = 0;
    long accepted = 0;
    double max_resync_drift = 0.0;

    ChainState(Configuration cfg, QuadratureGrid g, Xoshiro256pp r)
        : config(std::move(cfg)), grid(std::move(g)), cache(grid, config.components()), rng(r) {}

    double acceptance_rate() const {
        return iteration > 0 ? static_cast<double>(accepted) / static_cast<double>(iteration) : 0.0;
    }
};

// Draw the initial configuration for one chain and prepare its cache.
// Random draws occur in a fixed order (component-major, then term: center
// axes, width, coefficient) so chains are reproducible.
ChainState initialize(const SimulationConfig& sim, int chain_index);

// min(1, exp(-delta_S)); consumes one uniform only when delta_S > 0
bool metropolis_accept(double delta_action, Xoshiro256pp& rng);

// One proposal: pick a term uniformly over all components, bump its
// coefficient by U[-cutoff, cutoff), accept/reject, advance the counters.
void metropolis_step(ChainState& state, const SimulationConfig& sim);

ObservableSeries make_series(const SimulationConfig& sim);

using ChainHook = std::function<void(const ChainState&)>;

// Advance a chain to sim.n_iteration, recording the series every
// measure.interval iterations (and at iteration 0 for fresh chains). The
// cache is rebuilt from scratch every resync_interval iterations and at the
// final iteration; the incremental action is replaced by the recomputed one
// and the largest observed drift is recorded.
void run_chain(ChainState& state, const SimulationConfig& sim, ObservableSeries& series,
               const ChainHook& hook = {});

struct ChainResult {
    ChainState state;
    ObservableSeries series;
};

// Advance existing chains (used both for fresh runs and checkpoint resumes).
void run_chains(std::vector<ChainResult>& chains, const SimulationConfig& sim, int n_workers);

std::vector<ChainResult> run_ensemble(const SimulationConfig& sim, int n_workers = 1);

// Saturation heuristic: means of the last two windows of window_fraction of
// the recorded values must agree within one combined standard error.
struct ConvergenceCheck {
    bool converged = false;
    double mean_recent = 0.0;
    double mean_previous = 0.0;
    double combined_error = 0.0;
};

ConvergenceCheck check_convergence(std::span<const double> values, double window_fraction = 0.1);

}  // namespace gpimc
