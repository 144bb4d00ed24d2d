#include "gpimc/sampler.hpp"

#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>

#include "gpimc/stats.hpp"

namespace gpimc {

void SimulationConfig::validate() const {
    model.validate();
    const bool is_path = model.kind == ModelKind::HarmonicOscillator;
    if (is_path && domain.dims != 1)
        throw std::invalid_argument("config: particle models need a 1D domain");
    if (!is_path && domain.dims != 4)
        throw std::invalid_argument("config: gauge models need a 4D domain");
    if (terms_per_component < 1)
        throw std::invalid_argument("config: terms_per_component must be positive");
    if (placement == CenterPlacement::UniformGrid && domain.dims == 4) {
        long prod = 1;
        for (int d = 0; d < 4; ++d) {
            if (center_grid[d] < 1)
                throw std::invalid_argument("config: center_grid counts must be positive");
            prod *= center_grid[d];
        }
        if (prod != terms_per_component)
            throw std::invalid_argument("config: center_grid product != terms_per_component");
    }
    if (scale.mode == ScaleStrategy::Mode::Fixed) {
        if (!(scale.xi > 0.0)) throw std::invalid_argument("config: xi must be positive");
    } else {
        if (!(scale.xi_min > 0.0) || !(scale.xi_max >= scale.xi_min))
            throw std::invalid_argument("config: need 0 < xi_min <= xi_max");
    }
    if (!(amplitude_cutoff > 0.0))
        throw std::invalid_argument("config: amplitude_cutoff must be positive");
    if (n_iteration < 1) throw std::invalid_argument("config: n_iteration must be positive");
    if (ensemble_size < 1) throw std::invalid_argument("config: ensemble_size must be positive");
    if (!(truncation_epsilon > 0.0 && truncation_epsilon < 1.0))
        throw std::invalid_argument("config: truncation_epsilon must be in (0,1)");
    if (measure.interval < 1) throw std::invalid_argument("config: measurement interval");
    if (resync_interval < 1) throw std::invalid_argument("config: resync_interval");
    if (measure.histogram_bins < 1 || measure.field_histogram_bins < 1)
        throw std::invalid_argument("config: histogram bins");
    if (!(measure.histogram_range > 0.0) || !(measure.field_histogram_range > 0.0))
        throw std::invalid_argument("config: histogram range");
    if (!is_path && !measure.loops.t_extents.empty()) {
        const LoopPlan& lp = measure.loops;
        if (!(lp.segment_length > 0.0) || !(lp.time_step > 0.0) || lp.loops_per_pair < 1)
            throw std::invalid_argument("config: loop plan");
        for (double t : lp.t_extents)
            if (!(t > 0.0) || t + lp.time_step >= domain.extents[3])
                throw std::invalid_argument("config: loop T extents must fit the box");
        for (double r : lp.r_extents)
            if (!(r > 0.0) || r >= domain.extents[0])
                throw std::invalid_argument("config: loop R extents must fit the box");
    }
}

void ObservableSeries::append(long iteration, double action, double derived) {
    if (!entries.empty() && iteration <= entries.back().iteration)
        throw std::logic_error("series: iterations must increase");
    entries.push_back({iteration, action, derived});
}

ObservableSeries make_series(const SimulationConfig& sim) {
    ObservableSeries s;
    s.derived_name = sim.model.kind == ModelKind::HarmonicOscillator ? "potential_avg"
                                                                     : "lagrangian_density_avg";
    return s;
}

namespace {

Point grid_center_1d(const PeriodicDomain& dom, int i, int n) {
    Point p{};
    p[0] = i * dom.extents[0] / n;
    return p;
}

Point grid_center_4d(const PeriodicDomain& dom, const std::array<int, kMaxDims>& counts,
                     int flat) {
    // flat = ((ix * ny + iy) * nz + iz) * nt + it
    std::array<int, kMaxDims> idx{};
    for (int d = 3; d >= 0; --d) {
        idx[d] = flat % counts[d];
        flat /= counts[d];
    }
    Point p{};
    for (int d = 0; d < 4; ++d)
        p[d] = idx[d] * dom.extents[d] / counts[d];
    return p;
}

double derived_observable(const ChainState& state, const SimulationConfig& sim) {
    if (sim.model.kind == ModelKind::HarmonicOscillator) {
        const double w = sim.model.omega;
        return 0.5 * sim.model.mass * w * w * state.cache.mean_square_value(0);
    }
    return state.current_action / sim.domain.volume();
}

void resync(ChainState& state, const SimulationConfig& sim) {
    state.cache.build(state.config);
    const double full = state.cache.action_total(sim.model);
    state.max_resync_drift =
        std::max(state.max_resync_drift, std::abs(state.current_action - full));
    state.current_action = full;
}

}  // namespace

ChainState initialize(const SimulationConfig& sim, int chain_index) {
    sim.validate();
    Xoshiro256pp rng = Xoshiro256pp::for_chain(sim.rng_seed, static_cast<std::uint64_t>(chain_index));
    const int ncomp = sim.model.components();
    Configuration cfg(sim.domain, ncomp, sim.truncation_epsilon);
    for (int comp = 0; comp < ncomp; ++comp) {
        for (int i = 0; i < sim.terms_per_component; ++i) {
            GaussianTerm term;
            if (sim.placement == CenterPlacement::UniformGrid) {
                term.center = sim.domain.dims == 1
                                  ? grid_center_1d(sim.domain, i, sim.terms_per_component)
                                  : grid_center_4d(sim.domain, sim.center_grid, i);
            } else {
                for (int d = 0; d < sim.domain.dims; ++d)
                    term.center[d] = rng.uniform_range(0.0, sim.domain.extents[d]);
            }
            term.width = sim.scale.mode == ScaleStrategy::Mode::Fixed
                             ? sim.scale.xi
                             : rng.uniform_range(sim.scale.xi_min, sim.scale.xi_max);
            term.coefficient = sim.start == StartMode::Hot
                                   ? rng.uniform_range(-sim.amplitude_cutoff, sim.amplitude_cutoff)
                                   : 0.0;
            cfg.add_term(comp, term);
        }
    }
    cfg.freeze();

    QuadratureGrid grid(sim.domain, make_quadrature_spec(sim.domain, sim.scale.minimum(),
                                                         sim.quadrature));
    grid.require_spacing(cfg.min_width(), sim.quadrature);

    ChainState state(std::move(cfg), std::move(grid), rng);
    state.chain_index = chain_index;
    state.cache.build(state.config);
    state.current_action = state.cache.action_total(sim.model);
    return state;
}

bool metropolis_accept(double delta_action, Xoshiro256pp& rng) {
    if (delta_action <= 0.0) return true;
    return rng.uniform() < std::exp(-delta_action);
}

void metropolis_step(ChainState& state, const SimulationConfig& sim) {
    const int n_terms = state.config.terms_per_component();
    const std::uint64_t total = static_cast<std::uint64_t>(state.config.components()) *
                                static_cast<std::uint64_t>(n_terms);
    const std::uint64_t pick = sim.proposal == ProposalOrder::Random
                                   ? state.rng.uniform_int(total)
                                   : static_cast<std::uint64_t>(state.iteration) % total;
    const int comp = static_cast<int>(pick / static_cast<std::uint64_t>(n_terms));
    const int term = static_cast<int>(pick % static_cast<std::uint64_t>(n_terms));
    const double delta = state.rng.uniform_range(-sim.amplitude_cutoff, sim.amplitude_cutoff);
    const double ds = state.cache.action_delta(state.config, sim.model, comp, term, delta);
    if (metropolis_accept(ds, state.rng)) {
        state.config.set_coefficient(comp, term, state.config.coefficient(comp, term) + delta);
        state.cache.apply_delta(state.config, comp, term, delta);
        state.current_action += ds;
        ++state.accepted;
    }
    ++state.iteration;
}

void run_chain(ChainState& state, const SimulationConfig& sim, ObservableSeries& series,
               const ChainHook& hook) {
    const long target = sim.n_iteration;
    if (state.iteration == 0 && series.entries.empty()) {
        series.append(0, state.current_action, derived_observable(state, sim));
        if (hook) hook(state);
    }
    while (state.iteration < target) {
        metropolis_step(state, sim);
        const long it = state.iteration;
        if (it % sim.resync_interval == 0 || it == target) resync(state, sim);
        if (it % sim.measure.interval == 0) {
            series.append(it, state.current_action, derived_observable(state, sim));
            if (hook) hook(state);
        }
    }
}

void run_chains(std::vector<ChainResult>& chains, const SimulationConfig& sim, int n_workers) {
    if (n_workers < 1) n_workers = 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= chains.size()) return;
            run_chain(chains[i].state, sim, chains[i].series);
        }
    };
    if (n_workers == 1 || chains.size() <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    const int n = std::min<int>(n_workers, static_cast<int>(chains.size()));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

std::vector<ChainResult> run_ensemble(const SimulationConfig& sim, int n_workers) {
    sim.validate();
    std::vector<ChainResult> chains;
    chains.reserve(static_cast<std::size_t>(sim.ensemble_size));
    for (int i = 0; i < sim.ensemble_size; ++i)
        chains.push_back(ChainResult{initialize(sim, i), make_series(sim)});
    run_chains(chains, sim, n_workers);
    return chains;
}

ConvergenceCheck check_convergence(std::span<const double> values, double window_fraction) {
    ConvergenceCheck out;
    if (!(window_fraction > 0.0 && window_fraction <= 0.5))
        throw std::invalid_argument("check_convergence: window fraction must be in (0, 0.5]");
    const std::size_t w = static_cast<std::size_t>(window_fraction * static_cast<double>(values.size()));
    if (w < 2 || values.size() < 2 * w) return out;  // not enough data: not converged
    const auto recent = values.subspan(values.size() - w, w);
    const auto previous = values.subspan(values.size() - 2 * w, w);
    const MeanErr a = mean_and_error(recent);
    const MeanErr b = mean_and_error(previous);
    out.mean_recent = a.value;
    out.mean_previous = b.value;
    out.combined_error = std::sqrt(a.error * a.error + b.error * b.error);
    out.converged = std::abs(a.value - b.value) < out.combined_error;
    return out;
}

}  // namespace gpimc
