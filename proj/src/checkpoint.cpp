#include "gpimc/checkpoint.hpp"

#include <fstream>

namespace gpimc {

namespace {
constexpr const char* kFormat = "gpimc-checkpoint";
}

Json checkpoint_to_json(const SimulationConfig& sim, const std::vector<ChainResult>& chains) {
    Json j;
    j["format"] = kFormat;
    j["schema_version"] = kCheckpointSchemaVersion;
    j["config"] = serialize_config(sim);
    Json jchains = Json::array();
    for (const ChainResult& cr : chains) {
        const ChainState& st = cr.state;
        Json jc;
        jc["chain_index"] = st.chain_index;
        jc["iteration"] = st.iteration;
        jc["accepted"] = st.accepted;
        jc["current_action"] = st.current_action;
        jc["max_resync_drift"] = st.max_resync_drift;
        jc["rng_state"] = st.rng.state();
        Json jcomps = Json::array();
        for (int c = 0; c < st.config.components(); ++c) {
            Json comp;
            Json coeffs = Json::array();
            Json centers = Json::array();
            Json widths = Json::array();
            for (int i = 0; i < st.config.terms_per_component(); ++i) {
                coeffs.push_back(st.config.coefficient(c, i));
                Json ctr = Json::array();
                for (int d = 0; d < st.config.domain().dims; ++d)
                    ctr.push_back(st.config.center(c, i)[d]);
                centers.push_back(std::move(ctr));
                widths.push_back(st.config.width(c, i));
            }
            comp["coefficients"] = std::move(coeffs);
            comp["centers"] = std::move(centers);
            comp["widths"] = std::move(widths);
            jcomps.push_back(std::move(comp));
        }
        jc["components"] = std::move(jcomps);
        Json jser;
        jser["derived_name"] = cr.series.derived_name;
        Json its = Json::array(), acts = Json::array(), ders = Json::array();
        for (const SeriesEntry& e : cr.series.entries) {
            its.push_back(e.iteration);
            acts.push_back(e.action);
            ders.push_back(e.derived);
        }
        jser["iteration"] = std::move(its);
        jser["action"] = std::move(acts);
        jser["derived"] = std::move(ders);
        jc["series"] = std::move(jser);
        jchains.push_back(std::move(jc));
    }
    j["chains"] = std::move(jchains);
    return j;
}

CheckpointData checkpoint_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("format") || j["format"] != kFormat)
        throw CheckpointError("checkpoint: not a checkpoint file");
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != kCheckpointSchemaVersion)
        throw CheckpointError("checkpoint: unsupported schema_version");

    CheckpointData data;
    try {
        data.config = parse_config(j.at("config"));
    } catch (const ConfigError& e) {
        throw CheckpointError(std::string("checkpoint: embedded config invalid: ") + e.what());
    }
    const SimulationConfig& sim = data.config;
    const int ncomp = sim.model.components();

    if (!j.contains("chains") || !j.at("chains").is_array())
        throw CheckpointError("checkpoint: missing chains");
    for (const Json& jc : j.at("chains")) {
        try {
            Configuration cfg(sim.domain, ncomp, sim.truncation_epsilon);
            const Json& jcomps = jc.at("components");
            if (static_cast<int>(jcomps.size()) != ncomp)
                throw CheckpointError("checkpoint: component count mismatch");
            for (int c = 0; c < ncomp; ++c) {
                const Json& comp = jcomps.at(static_cast<std::size_t>(c));
                const Json& coeffs = comp.at("coefficients");
                const Json& centers = comp.at("centers");
                const Json& widths = comp.at("widths");
                if (static_cast<int>(coeffs.size()) != sim.terms_per_component)
                    throw CheckpointError("checkpoint: term count mismatch");
                for (int i = 0; i < sim.terms_per_component; ++i) {
                    GaussianTerm term;
                    term.coefficient = coeffs.at(static_cast<std::size_t>(i)).get<double>();
                    const Json& ctr = centers.at(static_cast<std::size_t>(i));
                    for (int d = 0; d < sim.domain.dims; ++d)
                        term.center[d] = ctr.at(static_cast<std::size_t>(d)).get<double>();
                    term.width = widths.at(static_cast<std::size_t>(i)).get<double>();
                    cfg.add_term(c, term);
                }
            }
            cfg.freeze();
            QuadratureGrid grid(sim.domain,
                                make_quadrature_spec(sim.domain, sim.scale.minimum(), sim.quadrature));
            Xoshiro256pp rng(0);
            Xoshiro256pp::State rst{};
            const Json& jr = jc.at("rng_state");
            for (int k = 0; k < 4; ++k) rst[static_cast<std::size_t>(k)] = jr.at(static_cast<std::size_t>(k)).get<std::uint64_t>();
            rng.set_state(rst);

            ChainState st(std::move(cfg), std::move(grid), rng);
            st.chain_index = jc.at("chain_index").get<int>();
            st.iteration = jc.at("iteration").get<long>();
            st.accepted = jc.at("accepted").get<long>();
            st.max_resync_drift = jc.at("max_resync_drift").get<double>();
            st.cache.build(st.config);
            // the stored action was recorded right after a full rebuild, so
            // the rebuilt cache reproduces it exactly
            st.current_action = jc.at("current_action").get<double>();

            ObservableSeries series;
            const Json& jser = jc.at("series");
            series.derived_name = jser.at("derived_name").get<std::string>();
            const Json& its = jser.at("iteration");
            const Json& acts = jser.at("action");
            const Json& ders = jser.at("derived");
            if (its.size() != acts.size() || its.size() != ders.size())
                throw CheckpointError("checkpoint: ragged series arrays");
            for (std::size_t k = 0; k < its.size(); ++k)
                series.append(its.at(k).get<long>(), acts.at(k).get<double>(),
                              ders.at(k).get<double>());

            data.chains.push_back(ChainResult{std::move(st), std::move(series)});
        } catch (const CheckpointError&) {
            throw;
        } catch (const std::exception& e) {
            throw CheckpointError(std::string("checkpoint: malformed chain record: ") + e.what());
        }
    }
    return data;
}

void save_checkpoint(const std::string& path, const SimulationConfig& sim,
                     const std::vector<ChainResult>& chains) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("checkpoint: cannot open '" + path + "' for writing");
    out << checkpoint_to_json(sim, chains).dump() << '\n';
    if (!out) throw CheckpointError("checkpoint: write failure on '" + path + "'");
}

CheckpointData load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("checkpoint: cannot open '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw CheckpointError("checkpoint: JSON parse failure in '" + path + "': " + e.what());
    }
    return checkpoint_from_json(j);
}

}  // namespace gpimc
