#include "gpimc/config_io.hpp"

#include <fstream>
#include <set>

namespace gpimc {

namespace {

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + ctx);
    }
}

const Json& need(const Json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("config: missing key '" + std::string(key) + "' in " + ctx);
    return *it;
}

double need_number(const Json& j, const char* key, const std::string& ctx) {
    const Json& v = need(j, key, ctx);
    if (!v.is_number()) throw ConfigError("config: '" + std::string(key) + "' must be a number");
    return v.get<double>();
}

long need_integer(const Json& j, const char* key, const std::string& ctx) {
    const Json& v = need(j, key, ctx);
    if (!v.is_number_integer())
        throw ConfigError("config: '" + std::string(key) + "' must be an integer");
    return v.get<long>();
}

std::string need_string(const Json& j, const char* key, const std::string& ctx) {
    const Json& v = need(j, key, ctx);
    if (!v.is_string()) throw ConfigError("config: '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> need_number_array(const Json& j, const char* key, const std::string& ctx) {
    const Json& v = need(j, key, ctx);
    if (!v.is_array()) throw ConfigError("config: '" + std::string(key) + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError("config: '" + std::string(key) + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

ModelKind parse_kind(const std::string& s) {
    if (s == "harmonic_oscillator") return ModelKind::HarmonicOscillator;
    if (s == "gauge_u1") return ModelKind::GaugeU1;
    if (s == "gauge_su2") return ModelKind::GaugeSU2;
    throw ConfigError("config: unknown model kind '" + s + "'");
}

std::string kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::HarmonicOscillator: return "harmonic_oscillator";
        case ModelKind::GaugeU1: return "gauge_u1";
        case ModelKind::GaugeSU2: return "gauge_su2";
    }
    return "?";
}

}  // namespace

SimulationConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
    reject_unknown(j, {"schema_version", "model", "domain", "basis", "sampler", "quadrature",
                       "measurement"},
                   "top level");
    if (need_integer(j, "schema_version", "top level") != kConfigSchemaVersion)
        throw ConfigError("config: unsupported schema_version");

    SimulationConfig sim;

    const Json& jm = need(j, "model", "top level");
    reject_unknown(jm, {"kind", "mass", "angular_frequency", "coupling"}, "model");
    sim.model.kind = parse_kind(need_string(jm, "kind", "model"));
    const bool is_path = sim.model.kind == ModelKind::HarmonicOscillator;
    if (is_path) {
        sim.model.mass = need_number(jm, "mass", "model");
        sim.model.omega = need_number(jm, "angular_frequency", "model");
        if (jm.contains("coupling")) throw ConfigError("config: coupling is a gauge key");
    } else {
        sim.model.coupling = need_number(jm, "coupling", "model");
        if (jm.contains("mass") || jm.contains("angular_frequency"))
            throw ConfigError("config: mass/angular_frequency are path keys");
    }

    const Json& jd = need(j, "domain", "top level");
    if (is_path) {
        reject_unknown(jd, {"dims", "time_extent"}, "domain");
        if (need_integer(jd, "dims", "domain") != 1)
            throw ConfigError("config: particle models need dims = 1");
        const double time_extent = need_number(jd, "time_extent", "domain");
        if (!(time_extent > 0.0)) throw ConfigError("config: time_extent must be positive");
        sim.domain = PeriodicDomain::line(time_extent);
    } else {
        reject_unknown(jd, {"dims", "space_extent", "time_extent"}, "domain");
        if (need_integer(jd, "dims", "domain") != 4)
            throw ConfigError("config: gauge models need dims = 4");
        const double space_extent = need_number(jd, "space_extent", "domain");
        const double time_extent = need_number(jd, "time_extent", "domain");
        if (!(space_extent > 0.0) || !(time_extent > 0.0))
            throw ConfigError("config: domain extents must be positive");
        sim.domain = PeriodicDomain::box4(space_extent, time_extent);
    }

    const Json& jb = need(j, "basis", "top level");
    reject_unknown(jb,
                   {"terms_per_component", "center_placement", "center_grid", "scale",
                    "truncation_epsilon"},
                   "basis");
    sim.terms_per_component = static_cast<int>(need_integer(jb, "terms_per_component", "basis"));
    const std::string placement = need_string(jb, "center_placement", "basis");
    if (placement == "uniform_grid")
        sim.placement = CenterPlacement::UniformGrid;
    else if (placement == "random")
        sim.placement = CenterPlacement::Random;
    else
        throw ConfigError("config: unknown center_placement '" + placement + "'");
    if (sim.placement == CenterPlacement::UniformGrid && !is_path) {
        const Json& jg = need(jb, "center_grid", "basis");
        if (!jg.is_array() || jg.size() != 4)
            throw ConfigError("config: center_grid must be an array of four counts");
        for (int d = 0; d < 4; ++d) sim.center_grid[d] = jg[d].get<int>();
    } else if (jb.contains("center_grid")) {
        throw ConfigError("config: center_grid applies to 4D uniform_grid placement only");
    }
    const Json& js = need(jb, "scale", "basis");
    const std::string mode = need_string(js, "mode", "basis.scale");
    if (mode == "fixed") {
        reject_unknown(js, {"mode", "xi"}, "basis.scale");
        sim.scale.mode = ScaleStrategy::Mode::Fixed;
        sim.scale.xi = need_number(js, "xi", "basis.scale");
    } else if (mode == "random_uniform") {
        reject_unknown(js, {"mode", "xi_min", "xi_max"}, "basis.scale");
        sim.scale.mode = ScaleStrategy::Mode::RandomUniform;
        sim.scale.xi_min = need_number(js, "xi_min", "basis.scale");
        sim.scale.xi_max = need_number(js, "xi_max", "basis.scale");
    } else {
        throw ConfigError("config: unknown scale mode '" + mode + "'");
    }
    sim.truncation_epsilon = need_number(jb, "truncation_epsilon", "basis");

    const Json& jsam = need(j, "sampler", "top level");
    reject_unknown(jsam,
                   {"amplitude_cutoff_q", "amplitude_cutoff_field", "amplitude_cutoff_inv_xi",
                    "start", "proposal_order", "iterations", "ensemble_size", "rng_seed",
                    "resync_interval"},
                   "sampler");
    if (is_path) {
        if (jsam.contains("amplitude_cutoff_field") || jsam.contains("amplitude_cutoff_inv_xi"))
            throw ConfigError("config: particle models use amplitude_cutoff_q");
        sim.amplitude_cutoff = need_number(jsam, "amplitude_cutoff_q", "sampler");
    } else {
        const bool abs_key = jsam.contains("amplitude_cutoff_field");
        const bool rel_key = jsam.contains("amplitude_cutoff_inv_xi");
        if (abs_key == rel_key)
            throw ConfigError(
                "config: gauge models need exactly one of amplitude_cutoff_field / "
                "amplitude_cutoff_inv_xi");
        if (jsam.contains("amplitude_cutoff_q"))
            throw ConfigError("config: amplitude_cutoff_q is a path key");
        if (abs_key) {
            sim.amplitude_cutoff = need_number(jsam, "amplitude_cutoff_field", "sampler");
        } else {
            if (sim.scale.mode != ScaleStrategy::Mode::Fixed)
                throw ConfigError("config: amplitude_cutoff_inv_xi needs a fixed scale");
            sim.amplitude_cutoff =
                need_number(jsam, "amplitude_cutoff_inv_xi", "sampler") / sim.scale.xi;
        }
    }
    const std::string start = need_string(jsam, "start", "sampler");
    if (start == "hot")
        sim.start = StartMode::Hot;
    else if (start == "cold")
        sim.start = StartMode::Cold;
    else
        throw ConfigError("config: unknown start mode '" + start + "'");
    if (jsam.contains("proposal_order")) {
        const std::string order = need_string(jsam, "proposal_order", "sampler");
        if (order == "random")
            sim.proposal = ProposalOrder::Random;
        else if (order == "sweep")
            sim.proposal = ProposalOrder::Sweep;
        else
            throw ConfigError("config: unknown proposal_order '" + order + "'");
    }
    sim.n_iteration = need_integer(jsam, "iterations", "sampler");
    sim.ensemble_size = static_cast<int>(need_integer(jsam, "ensemble_size", "sampler"));
    const Json& jseed = need(jsam, "rng_seed", "sampler");
    if (!jseed.is_number_unsigned() && !jseed.is_number_integer())
        throw ConfigError("config: rng_seed must be an integer");
    sim.rng_seed = jseed.get<std::uint64_t>();
    sim.resync_interval = need_integer(jsam, "resync_interval", "sampler");

    const Json& jq = need(j, "quadrature", "top level");
    reject_unknown(jq, {"profile"}, "quadrature");
    const std::string profile = need_string(jq, "profile", "quadrature");
    if (profile == "fine")
        sim.quadrature = QuadratureProfile::Fine;
    else if (profile == "coarse")
        sim.quadrature = QuadratureProfile::Coarse;
    else
        throw ConfigError("config: unknown quadrature profile '" + profile + "'");

    const Json& jme = need(j, "measurement", "top level");
    if (is_path) {
        reject_unknown(jme, {"interval", "histogram_bins", "histogram_range", "samples_per_path"},
                       "measurement");
        sim.measure.histogram_bins = static_cast<int>(need_integer(jme, "histogram_bins", "measurement"));
        sim.measure.histogram_range = need_number(jme, "histogram_range", "measurement");
        sim.measure.samples_per_path =
            static_cast<int>(need_integer(jme, "samples_per_path", "measurement"));
    } else {
        reject_unknown(jme,
                       {"interval", "field_histogram_bins", "field_histogram_range", "loops"},
                       "measurement");
        sim.measure.field_histogram_bins =
            static_cast<int>(need_integer(jme, "field_histogram_bins", "measurement"));
        sim.measure.field_histogram_range = need_number(jme, "field_histogram_range", "measurement");
        const Json& jl = need(jme, "loops", "measurement");
        reject_unknown(jl,
                       {"segment_length", "time_step", "t_extents", "r_extents", "loops_per_pair"},
                       "measurement.loops");
        sim.measure.loops.segment_length = need_number(jl, "segment_length", "loops");
        sim.measure.loops.time_step = need_number(jl, "time_step", "loops");
        sim.measure.loops.t_extents = need_number_array(jl, "t_extents", "loops");
        sim.measure.loops.r_extents = need_number_array(jl, "r_extents", "loops");
        sim.measure.loops.loops_per_pair =
            static_cast<int>(need_integer(jl, "loops_per_pair", "loops"));
    }
    sim.measure.interval = need_integer(jme, "interval", "measurement");

    try {
        sim.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return sim;
}

Json serialize_config(const SimulationConfig& sim) {
    const bool is_path = sim.model.kind == ModelKind::HarmonicOscillator;
    Json j;
    j["schema_version"] = kConfigSchemaVersion;

    Json jm;
    jm["kind"] = kind_name(sim.model.kind);
    if (is_path) {
        jm["mass"] = sim.model.mass;
        jm["angular_frequency"] = sim.model.omega;
    } else {
        jm["coupling"] = sim.model.coupling;
    }
    j["model"] = jm;

    Json jd;
    jd["dims"] = sim.domain.dims;
    if (!is_path) jd["space_extent"] = sim.domain.extents[0];
    jd["time_extent"] = sim.domain.extents[sim.domain.dims - 1];
    j["domain"] = jd;

    Json jb;
    jb["terms_per_component"] = sim.terms_per_component;
    jb["center_placement"] =
        sim.placement == CenterPlacement::UniformGrid ? "uniform_grid" : "random";
    if (sim.placement == CenterPlacement::UniformGrid && !is_path)
        jb["center_grid"] = sim.center_grid;
    Json js;
    if (sim.scale.mode == ScaleStrategy::Mode::Fixed) {
        js["mode"] = "fixed";
        js["xi"] = sim.scale.xi;
    } else {
        js["mode"] = "random_uniform";
        js["xi_min"] = sim.scale.xi_min;
        js["xi_max"] = sim.scale.xi_max;
    }
    jb["scale"] = js;
    jb["truncation_epsilon"] = sim.truncation_epsilon;
    j["basis"] = jb;

    Json jsam;
    if (is_path)
        jsam["amplitude_cutoff_q"] = sim.amplitude_cutoff;
    else
        jsam["amplitude_cutoff_field"] = sim.amplitude_cutoff;
    jsam["start"] = sim.start == StartMode::Hot ? "hot" : "cold";
    jsam["proposal_order"] = sim.proposal == ProposalOrder::Random ? "random" : "sweep";
    jsam["iterations"] = sim.n_iteration;
    jsam["ensemble_size"] = sim.ensemble_size;
    jsam["rng_seed"] = sim.rng_seed;
    jsam["resync_interval"] = sim.resync_interval;
    j["sampler"] = jsam;

    j["quadrature"] = Json{{"profile", sim.quadrature == QuadratureProfile::Fine ? "fine" : "coarse"}};

    Json jme;
    jme["interval"] = sim.measure.interval;
    if (is_path) {
        jme["histogram_bins"] = sim.measure.histogram_bins;
        jme["histogram_range"] = sim.measure.histogram_range;
        jme["samples_per_path"] = sim.measure.samples_per_path;
    } else {
        jme["field_histogram_bins"] = sim.measure.field_histogram_bins;
        jme["field_histogram_range"] = sim.measure.field_histogram_range;
        Json jl;
        jl["segment_length"] = sim.measure.loops.segment_length;
        jl["time_step"] = sim.measure.loops.time_step;
        jl["t_extents"] = sim.measure.loops.t_extents;
        jl["r_extents"] = sim.measure.loops.r_extents;
        jl["loops_per_pair"] = sim.measure.loops.loops_per_pair;
        jme["loops"] = jl;
    }
    j["measurement"] = jme;
    return j;
}

SimulationConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw ConfigError("config: JSON parse failure in '" + path + "': " + e.what());
    }
    return parse_config(j);
}

}  // namespace gpimc
