#pragma once

// Run orchestration: execute an ensemble, export artifacts (CSV series and
// histograms, potential data, fit, checkpoint, summary, metadata), resume
// from checkpoint, and print report tables.
//
// Artifact determinism: every file except run_metadata.json (which carries
// wall-clock time) is a pure function of the parsed config, so reruns with
// the same seed are byte-identical regardless of worker count.

#include <iosfwd>
#include <optional>
#include <string>

#include "gpimc/checkpoint.hpp"
#include "gpimc/config_io.hpp"

namespace gpimc {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::string out_dir;
    int workers = 1;
};

// Runs the ensemble and writes into opt.out_dir:
//   checkpoint.json         full sampler state (saved before measurements)
//   series_mean.csv         iteration, ensemble-mean S and derived observable
//   summary.json            headline numbers
//   run_metadata.json       config echo, generator/RNG info, wall time
//   paths: paths.csv, coordinate_histogram.csv
//   gauge: field_value_histogram.csv, coefficient_histogram.csv,
//          wilson_loops.csv, potential.csv, potential_fit.csv
// Returns the summary JSON.
Json execute_run(const SimulationConfig& sim, const RunOptions& opt);

// Continue a checkpointed run. With extra_iterations the target becomes
// current iteration + extra; otherwise the config's stored target is kept.
// Writes the full artifact set into opt.out_dir.
Json execute_resume(const std::string& checkpoint_path, std::optional<long> extra_iterations,
                    const RunOptions& opt);

// Prints the summary table of a completed run directory; compares measured
// values against registered analytic targets and flags > 3 sigma deviations.
// Throws ConfigError when artifacts are missing.
void print_report(const std::string& run_dir, std::ostream& os);

}  // namespace gpimc
