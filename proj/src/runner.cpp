#include "gpimc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpimc/observables.hpp"
#include "gpimc/oracle.hpp"

namespace gpimc {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::HarmonicOscillator: return "harmonic_oscillator";
        case ModelKind::GaugeU1: return "u1";
        case ModelKind::GaugeSU2: return "su2";
    }
    return "unknown";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << text;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

void write_json_file(const fs::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json mean_err_json(const MeanErr& me) {
    Json j;
    j["value"] = me.value;
    j["error"] = me.error;
    return j;
}

// Ensemble means of the per-chain series; all chains share one schedule.
void write_series_mean(const fs::path& path, const std::vector<ChainResult>& chains) {
    const ObservableSeries& first = chains.front().series;
    std::ostringstream os;
    os << "iteration,action,action_err," << first.derived_name << ',' << first.derived_name
       << "_err\n";
    std::vector<double> action(chains.size()), derived(chains.size());
    for (std::size_t row = 0; row < first.entries.size(); ++row) {
        for (std::size_t c = 0; c < chains.size(); ++c) {
            const ObservableSeries& s = chains[c].series;
            if (s.entries.size() != first.entries.size() ||
                s.entries[row].iteration != first.entries[row].iteration)
                throw std::runtime_error("chain series schedules differ");
            action[c] = s.entries[row].action;
            derived[c] = s.entries[row].derived;
        }
        MeanErr a = mean_and_error(action);
        MeanErr d = mean_and_error(derived);
        os << first.entries[row].iteration << ',' << fmt(a.value) << ',' << fmt(a.error) << ','
           << fmt(d.value) << ',' << fmt(d.error) << '\n';
    }
    write_text(path, os.str());
}

void write_histogram(const fs::path& path, const PooledHistogram& ph) {
    const Histogram& h = ph.pooled;
    std::ostringstream os;
    os << "bin_center,density,density_err,ensemble_err\n";
    std::vector<double> dens = h.density();
    for (int i = 0; i < h.bins(); ++i)
        os << fmt(h.bin_center(i)) << ',' << fmt(dens[i]) << ',' << fmt(h.density_error(i)) << ','
           << fmt(ph.ensemble_err[static_cast<std::size_t>(i)]) << '\n';
    write_text(path, os.str());
}

ConvergenceCheck action_convergence(const std::vector<ChainResult>& chains) {
    const std::size_t rows = chains.front().series.entries.size();
    std::vector<double> means(rows, 0.0);
    for (std::size_t row = 0; row < rows; ++row) {
        double s = 0.0;
        for (const ChainResult& c : chains) s += c.series.entries[row].action;
        means[row] = s / static_cast<double>(chains.size());
    }
    return check_convergence(means);
}

Json convergence_json(const ConvergenceCheck& c) {
    Json j;
    j["converged"] = c.converged;
    j["mean_recent"] = c.mean_recent;
    j["mean_previous"] = c.mean_previous;
    j["combined_error"] = c.combined_error;
    return j;
}

void export_path_artifacts(const fs::path& out, const SimulationConfig& sim,
                           const std::vector<ChainResult>& chains, Json& summary) {
    std::vector<double> pot(chains.size()), qsq(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c) {
        PathObservables obs = ho_observables(chains[c].state.config, sim.model, chains[c].state.grid);
        pot[c] = obs.potential_avg;
        qsq[c] = obs.q_sq_avg;
    }
    summary["observables"]["potential_avg"] = mean_err_json(mean_and_error(pot));
    summary["observables"]["q_sq_avg"] = mean_err_json(mean_and_error(qsq));
    GroundStateReference ref = analytic_ground_state(sim.model.mass, sim.model.omega);
    summary["targets"]["potential_avg"] = ref.potential_avg;
    summary["targets"]["q_sq_avg"] = ref.q_sq;

    std::vector<Histogram> per_chain;
    per_chain.reserve(chains.size());
    for (const ChainResult& c : chains)
        per_chain.push_back(make_histogram(sample_path(c.state.config, sim.measure.samples_per_path),
                                           sim.measure.histogram_bins, -sim.measure.histogram_range,
                                           sim.measure.histogram_range));
    write_histogram(out / "coordinate_histogram.csv", pool_histograms(per_chain));

    std::ostringstream os;
    os << "chain,tau,q\n";
    const int n_paths = std::min<int>(3, static_cast<int>(chains.size()));
    const int n_samples = sim.measure.samples_per_path;
    const double extent = sim.domain.extents[0];
    for (int c = 0; c < n_paths; ++c) {
        std::vector<double> q = sample_path(chains[c].state.config, n_samples);
        for (int j = 0; j < n_samples; ++j) {
            double tau = (j + 0.5) * extent / n_samples;
            os << c << ',' << fmt(tau) << ',' << fmt(q[j]) << '\n';
        }
    }
    write_text(out / "paths.csv", os.str());
}

void export_gauge_artifacts(const fs::path& out, const SimulationConfig& sim,
                            const std::vector<ChainResult>& chains, Json& summary) {
    std::vector<Histogram> field, coeff;
    field.reserve(chains.size());
    coeff.reserve(chains.size());
    std::vector<LoopMeans> per_path;
    per_path.reserve(chains.size());
    for (const ChainResult& c : chains) {
        field.push_back(field_value_histogram(c.state.cache, sim.measure.field_histogram_bins,
                                              sim.measure.field_histogram_range));
        coeff.push_back(coefficient_histogram(c.state.config, sim.measure.field_histogram_bins,
                                              sim.measure.field_histogram_range));
        // Snapshot of the chain stream: measurement draws do not perturb the
        // sampling sequence, so checkpoints stay resume-exact.
        Xoshiro256pp rng = c.state.rng;
        per_path.push_back(measure_wilson_loops(c.state.config, sim.model, sim.measure.loops, rng));
    }
    write_histogram(out / "field_value_histogram.csv", pool_histograms(field));
    write_histogram(out / "coefficient_histogram.csv", pool_histograms(coeff));

    const LoopMeans& shape = per_path.front();
    std::ostringstream os;
    os << "t_extent,r_extent,loop_re,loop_re_err,loop_im\n";
    std::vector<double> re(per_path.size()), im(per_path.size());
    for (std::size_t it = 0; it < shape.t_extents.size(); ++it) {
        for (std::size_t ir = 0; ir < shape.r_extents.size(); ++ir) {
            for (std::size_t p = 0; p < per_path.size(); ++p) {
                re[p] = per_path[p].re[it * shape.r_extents.size() + ir];
                im[p] = per_path[p].im[it * shape.r_extents.size() + ir];
            }
            MeanErr r = mean_and_error(re);
            MeanErr i = mean_and_error(im);
            os << fmt(shape.t_extents[it]) << ',' << fmt(shape.r_extents[ir]) << ',' << fmt(r.value)
               << ',' << fmt(r.error) << ',' << fmt(i.value) << '\n';
        }
    }
    write_text(out / "wilson_loops.csv", os.str());

    PotentialResult pot = static_potential(per_path, sim.measure.loops.time_step);
    std::ostringstream pos;
    pos << "r,v,err\n";
    for (const PotentialPoint& p : pot.points)
        pos << fmt(p.r) << ',' << fmt(p.v) << ',' << fmt(p.err) << '\n';
    write_text(out / "potential.csv", pos.str());

    std::vector<double> density(chains.size());
    for (std::size_t c = 0; c < chains.size(); ++c)
        density[c] = chains[c].state.current_action / sim.domain.volume();
    summary["observables"]["lagrangian_density_avg"] = mean_err_json(mean_and_error(density));

    Json wilson;
    wilson["t_base"] = pot.t_base;
    wilson["t_step"] = pot.t_step;
    wilson["n_potential_points"] = static_cast<int>(pot.points.size());
    wilson["excluded_r"] = pot.excluded_r;
    summary["wilson"] = wilson;

    const bool u1 = sim.model.kind == ModelKind::GaugeU1;
    const FitKind fit_kind = u1 ? FitKind::Coulomb : FitKind::Linear;
    std::ostringstream fos;
    fos << "parameter,value,error\n";
    Json fit_json;
    try {
        PotentialFit fit = fit_potential(pot.points, fit_kind);
        const char* p0_name = u1 ? "alpha" : "sigma";
        fos << p0_name << ',' << fmt(fit.p0) << ',' << fmt(fit.p0_err) << '\n';
        fos << "offset," << fmt(fit.p1) << ',' << fmt(fit.p1_err) << '\n';
        fit_json["kind"] = u1 ? "coulomb" : "linear";
        fit_json[p0_name] = fit.p0;
        fit_json[std::string(p0_name) + "_err"] = fit.p0_err;
        fit_json["offset"] = fit.p1;
        fit_json["offset_err"] = fit.p1_err;
        fit_json["chi2"] = fit.chi2;
        fit_json["n_points"] = fit.n_points;
    } catch (const std::exception& e) {
        fit_json["error"] = e.what();
    }
    write_text(out / "potential_fit.csv", fos.str());
    summary["potential_fit"] = fit_json;
    if (u1)
        summary["targets"]["alpha"] =
            sim.model.coupling * sim.model.coupling / (4.0 * std::numbers::pi);
}

Json export_artifacts(const SimulationConfig& sim, const std::vector<ChainResult>& chains,
                      const RunOptions& opt, double wall_seconds) {
    if (chains.empty()) throw std::runtime_error("no chains to export");
    fs::path out(opt.out_dir);
    fs::create_directories(out);

    save_checkpoint((out / "checkpoint.json").string(), sim, chains);
    write_series_mean(out / "series_mean.csv", chains);

    Json summary;
    summary["format"] = "gpimc-summary";
    summary["schema_version"] = 1;
    summary["model"] = kind_name(sim.model.kind);
    summary["iterations"] = sim.n_iteration;
    summary["ensemble_size"] = sim.ensemble_size;

    std::vector<double> acc(chains.size()), act(chains.size());
    double drift = 0.0;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        acc[c] = chains[c].state.acceptance_rate();
        act[c] = chains[c].state.current_action;
        drift = std::max(drift, chains[c].state.max_resync_drift);
    }
    summary["acceptance_rate"] = mean_err_json(mean_and_error(acc));
    summary["action"] = mean_err_json(mean_and_error(act));
    summary["max_resync_drift"] = drift;
    summary["convergence"] = convergence_json(action_convergence(chains));

    if (sim.model.kind == ModelKind::HarmonicOscillator)
        export_path_artifacts(out, sim, chains, summary);
    else
        export_gauge_artifacts(out, sim, chains, summary);

    write_json_file(out / "summary.json", summary);

    Json meta;
    meta["format"] = "gpimc-run-metadata";
    meta["schema_version"] = 1;
    meta["generator"] = std::string("gpimc ") + kVersion;
    meta["rng"] = "xoshiro256++ with splitmix64-derived chain streams";
    meta["workers"] = opt.workers;
    meta["wall_seconds"] = wall_seconds;
    meta["config"] = serialize_config(sim);
    write_json_file(out / "run_metadata.json", meta);

    return summary;
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Json read_json_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open " + path.string());
    Json j = Json::parse(is, nullptr, false);
    if (j.is_discarded()) throw ConfigError("invalid JSON in " + path.string());
    return j;
}

}  // namespace

Json execute_run(const SimulationConfig& sim, const RunOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    std::vector<ChainResult> chains = run_ensemble(sim, opt.workers);
    return export_artifacts(sim, chains, opt, elapsed_seconds(start));
}

Json execute_resume(const std::string& checkpoint_path, std::optional<long> extra_iterations,
                    const RunOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    CheckpointData data = load_checkpoint(checkpoint_path);
    SimulationConfig sim = data.config;
    if (extra_iterations) {
        long base = 0;
        for (const ChainResult& c : data.chains) base = std::max(base, c.state.iteration);
        sim.n_iteration = base + *extra_iterations;
    }
    run_chains(data.chains, sim, opt.workers);
    return export_artifacts(sim, data.chains, opt, elapsed_seconds(start));
}

void print_report(const std::string& run_dir, std::ostream& os) {
    fs::path dir(run_dir);
    Json summary = read_json_file(dir / "summary.json");
    Json meta;
    if (fs::exists(dir / "run_metadata.json")) meta = read_json_file(dir / "run_metadata.json");

    auto get_num = [](const Json& j, const char* key) -> double {
        return j.contains(key) ? j.at(key).get<double>() : 0.0;
    };

    os << "run directory:  " << run_dir << '\n';
    os << "model:          " << summary.value("model", "?") << '\n';
    os << "iterations:     " << summary.value("iterations", 0L)
       << "   ensemble: " << summary.value("ensemble_size", 0);
    if (!meta.is_null())
        os << "   workers: " << meta.value("workers", 0) << "   wall: " << std::fixed
           << std::setprecision(1) << meta.value("wall_seconds", 0.0) << " s";
    os << '\n' << std::defaultfloat;

    if (summary.contains("acceptance_rate"))
        os << "acceptance:     " << std::setprecision(4)
           << get_num(summary["acceptance_rate"], "value") << '\n';
    os << "resync drift:   " << std::setprecision(3) << summary.value("max_resync_drift", 0.0)
       << '\n';
    if (summary.contains("convergence")) {
        const Json& c = summary["convergence"];
        os << "convergence:    " << (c.value("converged", false) ? "converged" : "NOT CONVERGED")
           << "  (window means " << std::setprecision(6) << get_num(c, "mean_previous") << " -> "
           << get_num(c, "mean_recent") << ", combined err " << std::setprecision(3)
           << get_num(c, "combined_error") << ")\n";
    }
    if (summary.contains("action")) {
        os << "action:         " << std::setprecision(8) << get_num(summary["action"], "value")
           << " +- " << std::setprecision(3) << get_num(summary["action"], "error") << '\n';
    }

    const Json targets = summary.value("targets", Json::object());
    if (summary.contains("observables")) {
        os << '\n'
           << std::left << std::setw(24) << "observable" << std::setw(16) << "value"
           << std::setw(14) << "error" << std::setw(14) << "target" << "pull\n";
        for (const auto& [name, entry] : summary["observables"].items()) {
            double value = get_num(entry, "value");
            double error = get_num(entry, "error");
            os << std::setw(24) << name << std::setw(16) << std::setprecision(8) << value
               << std::setw(14) << std::setprecision(3) << error;
            if (targets.contains(name)) {
                double target = targets.at(name).get<double>();
                os << std::setw(14) << std::setprecision(8) << target;
                if (error > 0.0) {
                    double pull = (value - target) / error;
                    os << std::setprecision(2) << pull;
                    if (std::abs(pull) > 3.0) os << "   ** deviates";
                } else {
                    os << "n/a";
                }
            } else {
                os << std::setw(14) << "-" << "-";
            }
            os << '\n';
        }
    }

    if (summary.contains("potential_fit")) {
        const Json& fit = summary["potential_fit"];
        os << '\n';
        if (fit.contains("error")) {
            os << "potential fit:  FAILED (" << fit["error"].get<std::string>() << ")\n";
        } else {
            const bool coulomb = fit.value("kind", "") == "coulomb";
            const char* p0 = coulomb ? "alpha" : "sigma";
            double v = get_num(fit, p0);
            double e = get_num(fit, (std::string(p0) + "_err").c_str());
            os << "potential fit (" << fit.value("kind", "?") << "):\n";
            os << "  " << std::setw(8) << p0 << "= " << std::setprecision(8) << v << " +- "
               << std::setprecision(3) << e;
            if (coulomb && targets.contains("alpha")) {
                double target = targets.at("alpha").get<double>();
                os << "   target " << std::setprecision(8) << target << " (g^2/4pi)";
                if (e > 0.0) {
                    double pull = (v - target) / e;
                    os << "   pull " << std::setprecision(2) << pull;
                    if (std::abs(pull) > 3.0) os << "   ** deviates";
                }
            }
            os << '\n';
            os << "  " << std::setw(8) << "offset" << "= " << std::setprecision(8)
               << get_num(fit, "offset") << " +- " << std::setprecision(3)
               << get_num(fit, "offset_err") << '\n';
            os << "  chi2 = " << std::setprecision(4) << get_num(fit, "chi2") << " over "
               << fit.value("n_points", 0) << " points\n";
        }
        if (summary.contains("wilson")) {
            const Json& w = summary["wilson"];
            os << "  V(R) from W(T,R)/W(T+t,R) at T = " << get_num(w, "t_base")
               << ", t = " << get_num(w, "t_step");
            if (w.contains("excluded_r") && !w["excluded_r"].empty()) {
                os << "; excluded R:";
                for (const auto& r : w["excluded_r"]) os << ' ' << r.get<double>();
            }
            os << '\n';
        }
    }
}

}  // namespace gpimc
