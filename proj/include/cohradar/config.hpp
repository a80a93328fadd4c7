#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cohradar/correlator.hpp"
#include "cohradar/scene.hpp"
#include "cohradar/waveform.hpp"

namespace cohradar {

struct AnalysisConfig {
    int num_targets = 0; // 0 = choose by the F-ratio scan
    double detection_f_threshold = 0.0; // 0 = library default
};

// A scenario file: the sweep plan, the scene, and run controls. All units are
// SI and carried in the field names (_s, _m, _hz, _mps). Parsing is strict:
// unknown keys are rejected.
struct ScenarioConfig {
    SweepPlan plan;
    Scene scene;
    CorrelatorMode mode = CorrelatorMode::kSemiAnalytic;
    int trials = 1;
    double delay_offset_m = 0.0;
    double sample_rate_hz = 0.0;          // sampled mode and spectrum runs
    std::vector<int> spectrum_points;     // sweep indices for cmd_spectrum
    bool keep_slow_time = false;
    AnalysisConfig analysis;

    SweepOptions sweep_options() const;
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& path);

// Canonical re-serialization of the resolved config; embedded in every JSON
// report as the audit trail.
nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config);

} // namespace cohradar
