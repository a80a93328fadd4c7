#include "cohradar/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "cohradar/analytic.hpp"
#include "cohradar/errors.hpp"
#include "cohradar/estimator.hpp"
#include "cohradar/io.hpp"
#include "cohradar/spectrum.hpp"

namespace cohradar {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string join_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir.empty() ? "." : dir);
    return (fs::path(dir.empty() ? "." : dir) / name).string();
}

void write_json(const std::string& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

TheoryCurve theory_or_nan(const ScenarioConfig& config) {
    try {
        return theory_curve(config.plan, config.scene);
    } catch (const std::invalid_argument&) {
        TheoryCurve curve; // no closed form (several moving targets)
        const auto m_count = static_cast<std::size_t>(config.plan.num_points);
        curve.l_m.resize(m_count);
        curve.mean.assign(m_count, std::nan(""));
        curve.std.assign(m_count, std::nan(""));
        for (int m = 0; m < config.plan.num_points; ++m) {
            curve.l_m[static_cast<std::size_t>(m)] =
                kSpeedOfLight * coherence_time(config.plan, m);
        }
        return curve;
    }
}

} // namespace

CommandOutput cmd_sweep(const ScenarioConfig& config, const std::string& out_dir) {
    const SweepRecord record = run_sweep(config.plan, config.scene, config.sweep_options());
    const TheoryCurve theory = theory_or_nan(config);

    CsvTable table;
    table.header = {"m", "l_m_meters", "c_raw", "c_norm", "theory_mean", "theory_std"};
    for (int m = 0; m < config.plan.num_points; ++m) {
        const auto i = static_cast<std::size_t>(m);
        table.rows.push_back({static_cast<double>(m), record.l_m[i], record.c_raw[i],
                              record.c_norm[i], theory.mean[i], theory.std[i]});
    }
    const std::string csv_path = join_path(out_dir, "sweep.csv");
    write_csv(csv_path, table);

    ordered_json report;
    report["config"] = scenario_to_json(config);
    report["warnings"] = config.plan.warnings();
    report["num_points"] = config.plan.num_points;
    const std::string json_path = join_path(out_dir, "sweep.json");
    write_json(json_path, report);

    return {{csv_path, json_path},
            "sweep: " + std::to_string(config.plan.num_points) + " points -> " + csv_path};
}

CommandOutput cmd_montecarlo(const ScenarioConfig& config, const std::string& out_dir) {
    if (config.trials < 2) {
        throw std::invalid_argument("montecarlo: trials must be >= 2");
    }
    const MonteCarloResult mc =
        monte_carlo_sweeps(config.plan, config.scene, config.trials, config.sweep_options());
    const TheoryCurve theory = theory_or_nan(config);

    CsvTable summary;
    summary.header = {"m", "l_m_meters", "mean_c_norm", "std_c_norm", "theory_mean", "theory_std"};
    double max_mean_dev = 0.0; // |mean - theory| in units of theory_std
    double max_std_dev = 0.0;  // |std/theory_std - 1|
    bool have_theory = false;
    for (int m = 0; m < config.plan.num_points; ++m) {
        const auto i = static_cast<std::size_t>(m);
        summary.rows.push_back({static_cast<double>(m), mc.l_m[i], mc.mean_c_norm[i],
                                mc.std_c_norm[i], theory.mean[i], theory.std[i]});
        if (std::isfinite(theory.std[i]) && theory.std[i] > 0.0) {
            have_theory = true;
            max_mean_dev =
                std::max(max_mean_dev, std::abs(mc.mean_c_norm[i] - theory.mean[i]) / theory.std[i]);
            max_std_dev =
                std::max(max_std_dev, std::abs(mc.std_c_norm[i] / theory.std[i] - 1.0));
        }
    }
    const std::string csv_path = join_path(out_dir, "montecarlo.csv");
    write_csv(csv_path, summary);

    CsvTable trials_table;
    trials_table.header = {"trial", "m", "l_m_meters", "c_norm"};
    for (std::size_t t = 0; t < mc.trial_c_norm.size(); ++t) {
        for (int m = 0; m < config.plan.num_points; ++m) {
            const auto i = static_cast<std::size_t>(m);
            trials_table.rows.push_back({static_cast<double>(t), static_cast<double>(m),
                                         mc.l_m[i], mc.trial_c_norm[t][i]});
        }
    }
    const std::string trials_path = join_path(out_dir, "trials.csv");
    write_csv(trials_path, trials_table);

    ordered_json report;
    report["config"] = scenario_to_json(config);
    report["trials"] = config.trials;
    if (have_theory) {
        report["max_mean_deviation_sigmas"] = max_mean_dev;
        report["max_std_relative_error"] = max_std_dev;
        // 4 sigma / sqrt(trials), the sample-mean band used by the checks.
        report["mean_tolerance_sigmas"] = 4.0 / std::sqrt(static_cast<double>(config.trials));
    } else {
        report["max_mean_deviation_sigmas"] = nullptr;
        report["max_std_relative_error"] = nullptr;
    }
    const std::string json_path = join_path(out_dir, "montecarlo.json");
    write_json(json_path, report);

    std::ostringstream note;
    note << "montecarlo: " << config.trials << " trials";
    if (have_theory) {
        note << ", max mean dev " << max_mean_dev << " sigma, max std err " << max_std_dev;
    }
    return {{csv_path, trials_path, json_path}, note.str()};
}

namespace {

struct Series {
    std::vector<double> xs;
    std::vector<double> ys;
};

// One series per sweep: either a plain sweep.csv or a trials.csv keyed by the
// "trial" column.
std::vector<Series> load_series(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int col_l = table.column("l_m_meters");
    const int col_c = table.column("c_norm");
    if (col_l < 0 || col_c < 0) {
        throw IoError(path + ": needs columns l_m_meters and c_norm");
    }
    const int col_trial = table.column("trial");
    std::map<long, Series> by_trial;
    for (const auto& row : table.rows) {
        const long trial = col_trial >= 0 ? std::lround(row[static_cast<std::size_t>(col_trial)]) : 0;
        auto& series = by_trial[trial];
        series.xs.push_back(row[static_cast<std::size_t>(col_l)]);
        series.ys.push_back(row[static_cast<std::size_t>(col_c)]);
    }
    std::vector<Series> result;
    result.reserve(by_trial.size());
    for (auto& [trial, series] : by_trial) result.push_back(std::move(series));
    return result;
}

} // namespace

CommandOutput cmd_analyze(const ScenarioConfig& config, const std::vector<std::string>& csv_paths,
                          const std::string& out_dir) {
    if (csv_paths.empty()) throw std::invalid_argument("analyze: no input csv files");

    std::vector<Series> series;
    for (const std::string& path : csv_paths) {
        auto loaded = load_series(path);
        std::move(loaded.begin(), loaded.end(), std::back_inserter(series));
    }

    const double threshold = config.analysis.detection_f_threshold > 0.0
                                 ? config.analysis.detection_f_threshold
                                 : kDetectionFThreshold;
    int num_targets = config.analysis.num_targets;
    if (num_targets == 0) {
        num_targets = detect_breakpoint_count(series.front().xs, series.front().ys, 4, threshold);
    }

    ordered_json report;
    report["config"] = scenario_to_json(config);
    report["input_files"] = csv_paths;
    report["trials"] = series.size();
    report["num_targets"] = num_targets;
    report["detection_f_threshold"] = threshold;

    CommandOutput output;
    if (num_targets == 0) {
        report["verdict"] = "no_target";
        report["breakpoints_m"] = ordered_json::array();
        report["ranges_m"] = ordered_json::array();
        report["separations_m"] = ordered_json::array();
        output.summary = "analyze: no target detected";
    } else {
        std::vector<std::vector<double>> breaks_per_trial;
        double sse_sum = 0.0;
        for (const Series& s : series) {
            const BreakpointFit fit = fit_k_breakpoints(s.xs, s.ys, num_targets);
            breaks_per_trial.push_back(fit.breakpoints);
            sse_sum += fit.sse;
        }
        const auto trials = breaks_per_trial.size();
        std::vector<double> mean_breaks(static_cast<std::size_t>(num_targets), 0.0);
        for (const auto& breaks : breaks_per_trial) {
            for (std::size_t b = 0; b < breaks.size(); ++b) mean_breaks[b] += breaks[b];
        }
        for (double& b : mean_breaks) b /= static_cast<double>(trials);

        BreakpointFit mean_fit;
        mean_fit.breakpoints = mean_breaks;
        RangeReport ranges = ranges_from_fit(mean_fit, config.delay_offset_m);
        ranges.trials = static_cast<int>(trials);
        if (trials >= 2) {
            for (int b = 0; b < num_targets; ++b) {
                std::vector<double> samples;
                samples.reserve(trials);
                for (const auto& breaks : breaks_per_trial) {
                    samples.push_back(breaks[static_cast<std::size_t>(b)]);
                }
                ranges.accuracy_m.push_back(accuracy_from_trials(samples).second);
            }
        }

        report["verdict"] = "targets";
        report["breakpoints_m"] = mean_breaks;
        report["ranges_m"] = ranges.ranges_m;
        report["separations_m"] = ranges.separations_m;
        report["accuracy_m"] = ranges.accuracy_m;
        report["mean_fit_sse"] = sse_sum / static_cast<double>(trials);

        std::ostringstream note;
        note << "analyze: " << num_targets << " target(s)";
        if (!ranges.separations_m.empty()) {
            note << ", separation";
            for (const double s : ranges.separations_m) note << ' ' << s << " m";
        }
        output.summary = note.str();
    }

    const std::string json_path = join_path(out_dir, "analysis.json");
    write_json(json_path, report);
    output.files = {json_path};
    return output;
}

CommandOutput cmd_plan(const ScenarioConfig& config, const std::string& out_dir) {
    const SweepPlan& plan = config.plan;
    const double t_tot = total_sweep_time(plan);
    const double bw_max = max_bandwidth(plan.tau0_s);
    const double bw_tradeoff =
        tradeoff_bandwidth(t_tot, plan.num_pulses, plan.num_points, plan.delta_tau_s);
    const double hop = carrier_hop_bandwidth(plan.tau0_s);
    const double baseline = baseline_resolution(bw_max);

    ordered_json report;
    report["config"] = scenario_to_json(config);
    report["total_sweep_time_s"] = t_tot;
    report["max_bandwidth_hz"] = bw_max;
    report["tradeoff_bandwidth_hz"] = bw_tradeoff;
    report["carrier_hop_bandwidth_hz"] = hop;
    report["baseline_resolution_m"] = baseline;
    report["scan_start_m"] = plan.start_length_m();
    report["scan_span_m"] = plan.span_length_m();

    // Resolution ratio against the scene's closest target pair, if any.
    std::vector<double> lengths;
    for (const Target& t : config.scene.targets) lengths.push_back(t.roundtrip_length_m);
    std::sort(lengths.begin(), lengths.end());
    if (lengths.size() >= 2) {
        double min_sep = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < lengths.size(); ++i) {
            min_sep = std::min(min_sep, 0.5 * (lengths[i] - lengths[i - 1]));
        }
        report["target_separation_m"] = min_sep;
        report["resolution_ratio"] = baseline / min_sep;
    } else {
        report["target_separation_m"] = nullptr;
        report["resolution_ratio"] = nullptr;
    }
    report["warnings"] = plan.warnings();

    const std::string json_path = join_path(out_dir, "plan.json");
    write_json(json_path, report);

    std::ostringstream note;
    note << "plan: T_tot " << t_tot << " s, BW_max " << bw_max * 1e-6 << " MHz, baseline "
         << baseline << " m";
    return {{json_path}, note.str()};
}

namespace {

void spectrum_segment_shape(const SweepPlan& plan, int* pulses_per_segment, int* num_segments) {
    int pps = std::min(128, plan.num_pulses);
    int segs = plan.num_pulses / pps;
    segs = std::clamp(segs, 1, 32);
    *pulses_per_segment = pps;
    *num_segments = segs;
}

} // namespace

CommandOutput cmd_spectrum(const ScenarioConfig& config, const std::string& out_dir) {
    if (config.spectrum_points.empty()) {
        throw std::invalid_argument("spectrum: config.spectrum_points is empty");
    }
    if (!(config.sample_rate_hz > 2.0 * config.plan.carrier_hz)) {
        throw std::invalid_argument("spectrum: sample_rate_hz must exceed 2 * carrier_hz");
    }

    int pps = 0;
    int segs = 0;
    spectrum_segment_shape(config.plan, &pps, &segs);

    CommandOutput output;
    ordered_json report;
    report["config"] = scenario_to_json(config);
    report["pulses_per_segment"] = pps;
    report["num_segments"] = segs;
    ordered_json points = ordered_json::array();

    double power_min = std::numeric_limits<double>::infinity();
    double power_max = 0.0;
    for (const int m : config.spectrum_points) {
        const SpectrumMeasurement meas =
            measure_point_spectrum(config.plan, m, config.sample_rate_hz, pps, segs);

        CsvTable table;
        table.header = {"frequency_hz", "psd"};
        for (std::size_t i = 0; i < meas.psd.frequency_hz.size(); ++i) {
            table.rows.push_back({meas.psd.frequency_hz[i], meas.psd.psd[i]});
        }
        char name[32];
        std::snprintf(name, sizeof(name), "spectrum_m%04d.csv", m);
        const std::string csv_path = join_path(out_dir, name);
        write_csv(csv_path, table);
        output.files.push_back(csv_path);

        const double tau_m = coherence_time(config.plan, m);
        ordered_json entry;
        entry["m"] = m;
        entry["tau_m_s"] = tau_m;
        entry["expected_width_hz"] = meas.expected_width_hz;
        entry["measured_width_hz"] = meas.null_to_null_hz;
        entry["width_relative_error"] =
            meas.null_to_null_hz > 0.0
                ? std::abs(meas.null_to_null_hz - meas.expected_width_hz) / meas.expected_width_hz
                : std::nan("");
        entry["total_power"] = meas.total_power;
        entry["peak_frequency_hz"] = meas.peak_frequency_hz;
        points.push_back(entry);

        power_min = std::min(power_min, meas.total_power);
        power_max = std::max(power_max, meas.total_power);
    }
    report["points"] = points;
    report["power_ratio_max_over_min"] = power_min > 0.0 ? power_max / power_min : std::nan("");

    const std::string json_path = join_path(out_dir, "spectrum.json");
    write_json(json_path, report);
    output.files.push_back(json_path);
    output.summary =
        "spectrum: " + std::to_string(config.spectrum_points.size()) + " point(s) measured";
    return output;
}

} // namespace cohradar
