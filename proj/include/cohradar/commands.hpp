#pragma once

#include <string>
#include <vector>

#include "cohradar/config.hpp"

// Library-level entry points behind the CLI subcommands. Each writes its
// files under out_dir and returns the paths it produced. Outputs are
// deterministic: the same config and seed give byte-identical files
// regardless of worker count.

namespace cohradar {

struct CommandOutput {
    std::vector<std::string> files;
    std::string summary; // one-line human note, printed unless --quiet
};

// sweep.csv: m, l_m_meters, c_raw, c_norm, theory_mean, theory_std
// sweep.json: resolved config + run facts
CommandOutput cmd_sweep(const ScenarioConfig& config, const std::string& out_dir);

// montecarlo.csv (per-point mean/std + oracle columns), trials.csv (per-trial
// sweeps for later analysis), montecarlo.json (summary with
// max |mean - theory| / theory_std and max |std/theory_std - 1|).
CommandOutput cmd_montecarlo(const ScenarioConfig& config, const std::string& out_dir);

// analysis.json: breakpoints, ranges, separations, accuracy over trials,
// fit SSE. csv_paths may contain sweep.csv or trials.csv files.
CommandOutput cmd_analyze(const ScenarioConfig& config, const std::vector<std::string>& csv_paths,
                          const std::string& out_dir);

// plan.json: T_tot, BW_max (both forms), carrier-hop bandwidth, baseline
// resolution and the resolution ratio for the scene's target separation.
CommandOutput cmd_plan(const ScenarioConfig& config, const std::string& out_dir);

// spectrum_mXXXX.csv per selected sweep point plus spectrum.json comparing
// measured null-to-null widths with 2/tau_m.
CommandOutput cmd_spectrum(const ScenarioConfig& config, const std::string& out_dir);

} // namespace cohradar
