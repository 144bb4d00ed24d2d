// Command-line front end: run / resume / report / validate-config /
// list-presets. Exit codes: 0 success, 2 config problem, 3 checkpoint
// mismatch, 1 anything else.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpimc/presets.hpp"
#include "gpimc/runner.hpp"

namespace {

gpimc::Json read_json(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw gpimc::ConfigError("cannot open " + path);
    gpimc::Json j = gpimc::Json::parse(is, nullptr, false);
    if (j.is_discarded()) throw gpimc::ConfigError("invalid JSON in " + path);
    return j;
}

struct ConfigArgs {
    std::string preset;
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--preset", args.preset, "built-in preset name (see list-presets)");
    cmd->add_option("--config", args.config_path, "config JSON file");
    cmd->add_option("--set", args.overrides,
                    "config override as dotted.path=json-value, e.g. sampler.iterations=5000");
    cmd->add_option("--seed", args.seed, "override sampler.rng_seed");
}

// Assemble the effective config document: preset or file, then --set paths,
// then --seed. Overrides are applied to the JSON before parsing so they face
// the same validation as hand-written files.
gpimc::SimulationConfig build_config(const ConfigArgs& args) {
    if (args.preset.empty() == args.config_path.empty())
        throw gpimc::ConfigError("exactly one of --preset or --config is required");
    gpimc::Json doc = args.preset.empty() ? read_json(args.config_path)
                                          : gpimc::preset_config_json(args.preset);
    for (const std::string& kv : args.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw gpimc::ConfigError("--set expects path=value, got '" + kv + "'");
        std::string path = "/" + kv.substr(0, eq);
        for (char& c : path)
            if (c == '.') c = '/';
        gpimc::Json value = gpimc::Json::parse(kv.substr(eq + 1), nullptr, false);
        if (value.is_discarded()) value = kv.substr(eq + 1);  // bare string
        try {
            doc[gpimc::Json::json_pointer(path)] = value;
        } catch (const std::exception& e) {
            throw gpimc::ConfigError("--set " + kv + ": " + e.what());
        }
    }
    if (args.seed) doc["sampler"]["rng_seed"] = *args.seed;
    return gpimc::parse_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-basis path-integral Monte Carlo"};
    app.require_subcommand(1);

    ConfigArgs run_args;
    std::string run_out;
    int run_workers = 1;
    CLI::App* run = app.add_subcommand("run", "run an ensemble and write artifacts");
    add_config_options(run, run_args);
    run->add_option("--workers", run_workers, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out", run_out, "output directory")->required();
    run->callback([&] {
        gpimc::execute_run(build_config(run_args), {run_out, run_workers});
        std::cout << "run complete: " << run_out << '\n';
    });

    std::string resume_checkpoint, resume_out;
    int resume_workers = 1;
    std::optional<long> resume_extra;
    CLI::App* resume = app.add_subcommand("resume", "continue a run from its checkpoint");
    resume->add_option("--checkpoint", resume_checkpoint, "checkpoint.json of a previous run")
        ->required();
    resume->add_option("--iterations", resume_extra, "additional iterations beyond the checkpoint");
    resume->add_option("--workers", resume_workers, "worker threads")->check(CLI::PositiveNumber);
    resume->add_option("--out", resume_out, "output directory")->required();
    resume->callback([&] {
        gpimc::execute_resume(resume_checkpoint, resume_extra, {resume_out, resume_workers});
        std::cout << "resume complete: " << resume_out << '\n';
    });

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "summarize a finished run directory");
    report->add_option("dir", report_dir, "run output directory")->required();
    report->callback([&] { gpimc::print_report(report_dir, std::cout); });

    ConfigArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate-config", "parse and check a config");
    add_config_options(validate, validate_args);
    validate->callback([&] {
        gpimc::SimulationConfig sim = build_config(validate_args);
        std::cout << gpimc::serialize_config(sim).dump(2) << '\n';
    });

    CLI::App* list = app.add_subcommand("list-presets", "show built-in presets");
    list->callback([&] {
        for (const gpimc::PresetInfo& p : gpimc::list_presets())
            std::cout << p.name << "\n    " << p.summary << '\n';
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const gpimc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const gpimc::CheckpointError& e) {
        std::cerr << "checkpoint error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
