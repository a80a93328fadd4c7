#include "cohradar/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "cohradar/errors.hpp"

namespace cohradar {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + " must be a JSON object");
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw SchemaError("unknown key \"" + where + key + "\"");
        }
    }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw SchemaError("\"" + where + key + "\" must be a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& key, const std::string& where,
                     double fallback) {
    if (!j.contains(key)) return fallback;
    return get_number(j, key, where);
}

std::int64_t get_integer(const json& j, const std::string& key, const std::string& where) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw SchemaError("\"" + where + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

void require_key(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw SchemaError("missing key \"" + where + key + "\"");
}

SweepPlan parse_plan(const json& j) {
    require_object(j, "plan");
    reject_unknown_keys(j,
                        {"tau0_s", "start_length_m", "delta_tau_s", "span_length_m", "num_points",
                         "num_pulses", "carrier_hz", "seed"},
                        "plan.");
    SweepPlan plan;

    const bool has_tau0 = j.contains("tau0_s");
    const bool has_l0 = j.contains("start_length_m");
    if (has_tau0 == has_l0) {
        throw SchemaError("plan requires exactly one of \"tau0_s\" or \"start_length_m\"");
    }
    plan.tau0_s = has_tau0 ? get_number(j, "tau0_s", "plan.")
                           : get_number(j, "start_length_m", "plan.") / kSpeedOfLight;

    if (j.contains("delta_tau_s") && j.contains("span_length_m")) {
        throw SchemaError("plan allows only one of \"delta_tau_s\" or \"span_length_m\"");
    }
    if (j.contains("delta_tau_s")) {
        plan.delta_tau_s = get_number(j, "delta_tau_s", "plan.");
    } else if (j.contains("span_length_m")) {
        plan.delta_tau_s = get_number(j, "span_length_m", "plan.") / kSpeedOfLight;
    }

    require_key(j, "num_points", "plan.");
    require_key(j, "num_pulses", "plan.");
    plan.num_points = static_cast<int>(get_integer(j, "num_points", "plan."));
    plan.num_pulses = static_cast<int>(get_integer(j, "num_pulses", "plan."));
    plan.carrier_hz = get_number_or(j, "carrier_hz", "plan.", plan.carrier_hz);
    if (j.contains("seed")) {
        plan.seed = static_cast<std::uint64_t>(get_integer(j, "seed", "plan."));
    }
    return plan;
}

Target parse_target(const json& j, const std::string& where) {
    require_object(j, where);
    reject_unknown_keys(j, {"distance_m", "roundtrip", "attenuation", "velocity_mps"}, where + ".");
    require_key(j, "distance_m", where + ".");
    Target target;
    const double distance = get_number(j, "distance_m", where + ".");
    bool roundtrip = true;
    if (j.contains("roundtrip")) {
        const auto& v = j.at("roundtrip");
        if (!v.is_boolean()) throw SchemaError("\"" + where + ".roundtrip\" must be a boolean");
        roundtrip = v.get<bool>();
    }
    target.roundtrip_length_m = roundtrip ? distance : 2.0 * distance;
    target.attenuation = get_number_or(j, "attenuation", where + ".", 1.0);
    target.radial_velocity_mps = get_number_or(j, "velocity_mps", where + ".", 0.0);
    return target;
}

Scene parse_scene(const json& j) {
    require_object(j, "scene");
    reject_unknown_keys(j, {"targets", "snr", "noise_seed", "dc_bias"}, "scene.");
    Scene scene;
    if (j.contains("targets")) {
        const auto& arr = j.at("targets");
        if (!arr.is_array()) throw SchemaError("\"scene.targets\" must be an array");
        int index = 0;
        for (const auto& t : arr) {
            scene.targets.push_back(
                parse_target(t, "scene.targets[" + std::to_string(index) + "]"));
            ++index;
        }
    }
    require_key(j, "snr", "scene.");
    const auto& snr = j.at("snr");
    if (snr.is_string()) {
        if (snr.get<std::string>() != "noiseless") {
            throw SchemaError("\"scene.snr\" must be a positive number or \"noiseless\"");
        }
    } else if (snr.is_number()) {
        scene.snr = snr.get<double>();
    } else {
        throw SchemaError("\"scene.snr\" must be a positive number or \"noiseless\"");
    }
    if (j.contains("noise_seed")) {
        scene.noise_seed = static_cast<std::uint64_t>(get_integer(j, "noise_seed", "scene."));
    }
    scene.dc_bias = get_number_or(j, "dc_bias", "scene.", 0.0);
    return scene;
}

AnalysisConfig parse_analysis(const json& j) {
    require_object(j, "analysis");
    reject_unknown_keys(j, {"num_targets", "detection_f_threshold"}, "analysis.");
    AnalysisConfig analysis;
    if (j.contains("num_targets")) {
        analysis.num_targets = static_cast<int>(get_integer(j, "num_targets", "analysis."));
        if (analysis.num_targets < 0) {
            throw SchemaError("\"analysis.num_targets\" must be >= 0 (0 = auto)");
        }
    }
    analysis.detection_f_threshold =
        get_number_or(j, "detection_f_threshold", "analysis.", 0.0);
    return analysis;
}

} // namespace

SweepOptions ScenarioConfig::sweep_options() const {
    SweepOptions options;
    options.mode = mode;
    options.sample_rate_hz = sample_rate_hz;
    options.keep_slow_time = keep_slow_time;
    return options;
}

ScenarioConfig parse_scenario(const json& j) {
    require_object(j, "config");
    reject_unknown_keys(j,
                        {"plan", "scene", "mode", "trials", "delay_offset_m", "sample_rate_hz",
                         "spectrum_points", "keep_slow_time", "analysis"},
                        "");
    ScenarioConfig config;
    require_key(j, "plan", "");
    require_key(j, "scene", "");
    config.plan = parse_plan(j.at("plan"));
    config.scene = parse_scene(j.at("scene"));

    if (j.contains("mode")) {
        const auto& v = j.at("mode");
        if (!v.is_string()) throw SchemaError("\"mode\" must be a string");
        const std::string mode = v.get<std::string>();
        if (mode == "semianalytic") {
            config.mode = CorrelatorMode::kSemiAnalytic;
        } else if (mode == "sampled") {
            config.mode = CorrelatorMode::kSampled;
        } else {
            throw SchemaError("\"mode\" must be \"semianalytic\" or \"sampled\"");
        }
    }
    if (j.contains("trials")) {
        config.trials = static_cast<int>(get_integer(j, "trials", ""));
    }
    config.delay_offset_m = get_number_or(j, "delay_offset_m", "", 0.0);
    if (config.delay_offset_m < 0.0) throw SchemaError("\"delay_offset_m\" must be >= 0");
    config.sample_rate_hz = get_number_or(j, "sample_rate_hz", "", 0.0);
    if (j.contains("spectrum_points")) {
        const auto& arr = j.at("spectrum_points");
        if (!arr.is_array()) throw SchemaError("\"spectrum_points\" must be an array of indices");
        for (const auto& v : arr) {
            if (!v.is_number_integer()) {
                throw SchemaError("\"spectrum_points\" must contain integers");
            }
            config.spectrum_points.push_back(v.get<int>());
        }
    }
    if (j.contains("keep_slow_time")) {
        const auto& v = j.at("keep_slow_time");
        if (!v.is_boolean()) throw SchemaError("\"keep_slow_time\" must be a boolean");
        config.keep_slow_time = v.get<bool>();
    }
    if (j.contains("analysis")) config.analysis = parse_analysis(j.at("analysis"));

    // Surface invariant violations as schema errors with the field name.
    try {
        config.plan.validate();
        config.scene.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(e.what());
    }
    if (config.mode == CorrelatorMode::kSampled &&
        !(config.sample_rate_hz >= 8.0 * config.plan.carrier_hz)) {
        throw SchemaError("sampled mode requires sample_rate_hz >= 8 * plan.carrier_hz");
    }
    return config;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("config " + path + ": " + e.what());
    }
    return parse_scenario(j);
}

nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config) {
    nlohmann::ordered_json j;
    j["plan"] = {{"tau0_s", config.plan.tau0_s},
                 {"delta_tau_s", config.plan.delta_tau_s},
                 {"num_points", config.plan.num_points},
                 {"num_pulses", config.plan.num_pulses},
                 {"carrier_hz", config.plan.carrier_hz},
                 {"seed", config.plan.seed}};
    nlohmann::ordered_json targets = nlohmann::ordered_json::array();
    for (const Target& t : config.scene.targets) {
        targets.push_back({{"distance_m", t.roundtrip_length_m},
                           {"roundtrip", true},
                           {"attenuation", t.attenuation},
                           {"velocity_mps", t.radial_velocity_mps}});
    }
    j["scene"]["targets"] = targets;
    if (config.scene.snr.has_value()) {
        j["scene"]["snr"] = *config.scene.snr;
    } else {
        j["scene"]["snr"] = "noiseless";
    }
    j["scene"]["noise_seed"] = config.scene.noise_seed;
    j["scene"]["dc_bias"] = config.scene.dc_bias;
    j["mode"] = config.mode == CorrelatorMode::kSampled ? "sampled" : "semianalytic";
    j["trials"] = config.trials;
    j["delay_offset_m"] = config.delay_offset_m;
    j["sample_rate_hz"] = config.sample_rate_hz;
    j["spectrum_points"] = config.spectrum_points;
    j["keep_slow_time"] = config.keep_slow_time;
    j["analysis"] = {{"num_targets", config.analysis.num_targets},
                     {"detection_f_threshold", config.analysis.detection_f_threshold}};
    return j;
}

} // namespace cohradar
