#include "gpimc/presets.hpp"

#include <cmath>
#include <numbers>

namespace gpimc {

namespace {

Json ho_preset(int n_sum, const Json& scale, long iterations, std::uint64_t seed) {
    Json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["model"] = {{"kind", "harmonic_oscillator"}, {"mass", 1.0}, {"angular_frequency", 1.0}};
    j["domain"] = {{"dims", 1}, {"time_extent", 20.0}};
    j["basis"] = {{"terms_per_component", n_sum},
                  {"center_placement", "uniform_grid"},
                  {"scale", scale},
                  {"truncation_epsilon", 1e-8}};
    j["sampler"] = {{"amplitude_cutoff_q", 3.0}, {"start", "hot"},
                    {"proposal_order", "random"}, {"iterations", iterations},
                    {"ensemble_size", 400},      {"rng_seed", seed},
                    {"resync_interval", 1000}};
    j["quadrature"] = {{"profile", "fine"}};
    j["measurement"] = {{"interval", 10},
                        {"histogram_bins", 80},
                        {"histogram_range", 4.0},
                        {"samples_per_path", 500}};
    return j;
}

// Gauge boxes use xi = 1 as the length unit: X = n_space * sqrt(pi) * xi
// keeps the center grid spacing tied to the basis width, T = 2X.
Json gauge_preset(const std::string& kind, double coupling, int n_space, int ensemble,
                  long iterations, long resync, double epsilon, int loops_per_pair,
                  std::uint64_t seed) {
    const double xi = 1.0;
    const double space = n_space * std::sqrt(std::numbers::pi) * xi;
    const double time = 2.0 * space;
    const int n_time = 2 * n_space;
    const long n_terms = static_cast<long>(n_space) * n_space * n_space * n_time;

    // loop geometry: segments of xi/4; V(R) from a full-xi time-step ratio
    // (the wide step divides the correlated loop noise by t), T the two
    // largest multiples of the step with T <= X/2, R up to X/2
    const double seg = 0.25 * xi;
    const double tstep = xi;
    const double half = 0.5 * space;
    const double t_hi = std::floor(half / tstep) * tstep;
    Json t_extents = Json::array({t_hi - tstep, t_hi});
    Json r_extents = Json::array();
    for (double r = 1.0; r <= half + 1e-9; r += 0.5) r_extents.push_back(r);

    Json j;
    j["schema_version"] = kConfigSchemaVersion;
    j["model"] = {{"kind", kind}, {"coupling", coupling}};
    j["domain"] = {{"dims", 4}, {"space_extent", space}, {"time_extent", time}};
    j["basis"] = {{"terms_per_component", n_terms},
                  {"center_placement", "uniform_grid"},
                  {"center_grid", Json::array({n_space, n_space, n_space, n_time})},
                  {"scale", {{"mode", "fixed"}, {"xi", xi}}},
                  {"truncation_epsilon", epsilon}};
    j["sampler"] = {{"amplitude_cutoff_inv_xi", 1.3}, {"start", "hot"},
                    {"proposal_order", "random"},     {"iterations", iterations},
                    {"ensemble_size", ensemble},      {"rng_seed", seed},
                    {"resync_interval", resync}};
    j["quadrature"] = {{"profile", "coarse"}};
    j["measurement"] = {{"interval", 1000},
                        {"field_histogram_bins", 48},
                        {"field_histogram_range", 3.0},
                        {"loops",
                         {{"segment_length", seg},
                          {"time_step", tstep},
                          {"t_extents", t_extents},
                          {"r_extents", r_extents},
                          {"loops_per_pair", loops_per_pair}}}};
    return j;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
    return {
        {"ho-A", "oscillator, 50 terms, fixed width 1.0, 400 paths, 1e4 iterations"},
        {"ho-B", "oscillator, 100 terms, random widths in [0.2, 1.0], 400 paths"},
        {"ho-C", "oscillator, 200 terms, fixed width 0.2, 400 paths"},
        {"u1-desk", "U(1) on 5^3 x 10 centers, 10 paths, coarse quadrature (qualitative)"},
        {"su2-desk", "SU(2) g=3.5 on 5^3 x 10 centers, 10 paths, coarse quadrature (qualitative)"},
        {"u1-paper", "U(1) on 7^3 x 14 centers, 50 paths, full-length run"},
        {"su2-paper", "SU(2) g=3.5 on 7^3 x 14 centers, 50 paths, full-length run"},
    };
}

Json preset_config_json(const std::string& name) {
    if (name == "ho-A")
        return ho_preset(50, Json{{"mode", "fixed"}, {"xi", 1.0}}, 10000, 101);
    if (name == "ho-B")
        return ho_preset(100, Json{{"mode", "random_uniform"}, {"xi_min", 0.2}, {"xi_max", 1.0}},
                         10000, 102);
    if (name == "ho-C")
        return ho_preset(200, Json{{"mode", "fixed"}, {"xi", 0.2}}, 10000, 103);
    // Desk presets are qualitative: fewer centers and paths, a looser
    // truncation epsilon, the coarse quadrature profile, and more loop
    // positions per pair to compensate the small ensemble.
    if (name == "u1-desk")
        return gauge_preset("gauge_u1", 0.303, 5, 10, 200000, 50000, 1e-5, 80, 201);
    if (name == "su2-desk")
        return gauge_preset("gauge_su2", 3.5, 5, 10, 300000, 50000, 1e-5, 80, 202);
    if (name == "u1-paper")
        return gauge_preset("gauge_u1", 0.303, 7, 50, 600000, 100000, 1e-8, 10, 301);
    if (name == "su2-paper")
        return gauge_preset("gauge_su2", 3.5, 7, 50, 2000000, 100000, 1e-8, 10, 302);
    throw ConfigError("unknown preset '" + name + "'");
}

SimulationConfig preset_config(const std::string& name) {
    return parse_config(preset_config_json(name));
}

}  // namespace gpimc
