#include "cohradar/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "cohradar/rng.hpp"

namespace cohradar {

namespace detail {

double cos_cos_integral(double w, double a, double b, double tau, double t1, double t2,
                        bool with_double_freq) {
    // cos(A)cos(B) = cos(A-B)/2 + cos(A+B)/2 with A = w t + a, B = w (t-tau) + b.
    double value = 0.5 * std::cos(w * tau + a - b) * (t2 - t1);
    if (with_double_freq) {
        const double c = a + b - w * tau;
        value += (std::sin(2.0 * w * t2 + c) - std::sin(2.0 * w * t1 + c)) / (4.0 * w);
    }
    return value;
}

double sin_cos_integral(double w, double a, double b, double tau, double t1, double t2,
                        bool with_double_freq) {
    double value = 0.5 * std::sin(w * tau + a - b) * (t2 - t1);
    if (with_double_freq) {
        const double c = a + b - w * tau;
        value -= (std::cos(2.0 * w * t2 + c) - std::cos(2.0 * w * t1 + c)) / (4.0 * w);
    }
    return value;
}

namespace {

struct TargetGeometry {
    double attenuation = 0.0;
    double base_delay_s = 0.0;      // tau at scan start
    double phase_step_s = 0.0;      // per-pulse delay increment, 2 v tau_m / c
    double split_delay_s = 0.0;     // delay used for the window split
    std::int64_t pulse_shift = 0;   // floor(split / tau_m)
    double split_offset_s = 0.0;    // split - pulse_shift * tau_m, in [0, tau_m)
};

// Where the echo windows fall at sweep point m. The target position is
// frozen per pulse; between sweep points it advances by the sequential-scan
// accumulation 2 m N v tau_m / c, which decides whether the coherent window
// has reached the target. Inside the window the split keeps the initial
// delay, so the per-pulse motion enters only through the carrier phase.
TargetGeometry make_geometry(const Target& target, double tau_m, int m_eff, int num_pulses) {
    TargetGeometry g;
    g.attenuation = target.attenuation;
    g.base_delay_s = target.delay_s();
    const double v_over_c = target.radial_velocity_mps / kSpeedOfLight;
    g.phase_step_s = 2.0 * v_over_c * tau_m;
    const double gate_delay =
        g.base_delay_s + 2.0 * v_over_c * static_cast<double>(m_eff) * num_pulses * tau_m;
    const bool inside = gate_delay < tau_m;
    double split = inside ? g.base_delay_s : gate_delay;
    split = std::clamp(split, 0.0, inside ? tau_m : split);
    if (split < 0.0) split = 0.0;
    g.pulse_shift = static_cast<std::int64_t>(std::floor(split / tau_m));
    g.split_offset_s = split - static_cast<double>(g.pulse_shift) * tau_m;
    return g;
}

} // namespace

PointResult correlate_point_with_phases(const SweepPlan& plan, const Scene& scene, int m,
                                        const std::vector<double>& phases, int extra_history,
                                        const SweepOptions& options) {
    const double tau_m = coherence_time(plan, m);
    const double t_start = start_time(plan, m);
    const double w = plan.omega();
    const int num_pulses = plan.num_pulses;
    const int m_eff = plan.delta_tau_s > 0.0 ? m : 0;
    const bool ripple = options.include_double_freq;

    std::vector<TargetGeometry> geometry;
    geometry.reserve(scene.targets.size());
    for (const Target& target : scene.targets) {
        geometry.push_back(make_geometry(target, tau_m, m_eff, num_pulses));
    }

    auto phase_at = [&](std::int64_t n) {
        return phases[static_cast<std::size_t>(n + extra_history)];
    };

    PointResult result;
    std::vector<double> pulse_i;
    std::vector<double> pulse_q;
    if (options.keep_slow_time) {
        pulse_i.assign(static_cast<std::size_t>(num_pulses), 0.0);
        pulse_q.assign(static_cast<std::size_t>(num_pulses), 0.0);
    }

    double c_raw = 0.0;
    for (const TargetGeometry& g : geometry) {
        double target_sum = 0.0;
        for (int n = 0; n < num_pulses; ++n) {
            const double t1 = t_start + static_cast<double>(n) * tau_m;
            const double t2 = t1 + tau_m;
            const double boundary = t1 + g.split_offset_s;
            const double tau_phase = g.base_delay_s + static_cast<double>(n) * g.phase_step_s;
            const double phi_tx = phase_at(n);

            double in_phase = 0.0;
            double quad = 0.0;
            if (boundary > t1) {
                const double phi_echo = phase_at(n - g.pulse_shift - 1);
                in_phase += cos_cos_integral(w, phi_tx, phi_echo, tau_phase, t1, boundary, ripple);
                if (options.keep_slow_time) {
                    quad += sin_cos_integral(w, phi_tx, phi_echo, tau_phase, t1, boundary, ripple);
                }
            }
            if (t2 > boundary) {
                const double phi_echo = phase_at(n - g.pulse_shift);
                in_phase += cos_cos_integral(w, phi_tx, phi_echo, tau_phase, boundary, t2, ripple);
                if (options.keep_slow_time) {
                    quad += sin_cos_integral(w, phi_tx, phi_echo, tau_phase, boundary, t2, ripple);
                }
            }
            target_sum += g.attenuation * in_phase;
            if (options.keep_slow_time) {
                pulse_i[static_cast<std::size_t>(n)] += g.attenuation * in_phase / tau_m;
                pulse_q[static_cast<std::size_t>(n)] += g.attenuation * quad / tau_m;
            }
        }
        c_raw += target_sum / (static_cast<double>(num_pulses) * tau_m);
    }

    if (options.keep_slow_time) {
        result.slow_time.resize(static_cast<std::size_t>(num_pulses));
        const double sigma_pulse =
            scene.noiseless() ? 0.0
                              : 0.5 * scene.noise_reference_amplitude() *
                                    std::sqrt(static_cast<double>(num_pulses) / *scene.snr);
        double noisy_mean = 0.0;
        for (int n = 0; n < num_pulses; ++n) {
            double re = pulse_i[static_cast<std::size_t>(n)];
            double im = pulse_q[static_cast<std::size_t>(n)];
            if (sigma_pulse > 0.0) {
                re += sigma_pulse * rng::gaussian(scene.noise_seed, rng::kPulseNoiseDomain,
                                                  static_cast<std::uint64_t>(m), 2 * n);
                im += sigma_pulse * rng::gaussian(scene.noise_seed, rng::kPulseNoiseDomain,
                                                  static_cast<std::uint64_t>(m), 2 * n + 1);
            }
            result.slow_time[static_cast<std::size_t>(n)] = {re, im};
            noisy_mean += re;
        }
        if (sigma_pulse > 0.0) {
            // Keep c_raw consistent with the recorded per-pulse outputs.
            c_raw = noisy_mean / static_cast<double>(num_pulses);
        }
    } else if (!scene.noiseless()) {
        const double sigma_point =
            0.5 * scene.noise_reference_amplitude() * std::sqrt(1.0 / *scene.snr);
        c_raw += sigma_point * rng::gaussian(scene.noise_seed, rng::kPointNoiseDomain,
                                             static_cast<std::uint64_t>(m), 0);
    }

    result.c_raw = c_raw + scene.dc_bias;
    return result;
}

} // namespace detail

namespace {

// Longest echo history any target needs at sweep point m, in pulses.
int history_depth(const SweepPlan& plan, const Scene& scene, int m) {
    const double tau_m = coherence_time(plan, m);
    const int m_eff = plan.delta_tau_s > 0.0 ? m : 0;
    std::int64_t depth = 1;
    for (const Target& target : scene.targets) {
        const auto g = detail::make_geometry(target, tau_m, m_eff, plan.num_pulses);
        depth = std::max(depth, g.pulse_shift + 1);
    }
    return static_cast<int>(depth);
}

std::vector<double> phases_with_history(const SweepPlan& plan, int m, int extra_history) {
    std::vector<double> phases(static_cast<std::size_t>(plan.num_pulses + extra_history));
    const auto sweep_index = static_cast<std::uint32_t>(m);
    for (int n = -extra_history; n < plan.num_pulses; ++n) {
        phases[static_cast<std::size_t>(n + extra_history)] =
            rng::phase(plan.seed, sweep_index, n);
    }
    return phases;
}

} // namespace

PointResult correlate_point_semianalytic(const SweepPlan& plan, const Scene& scene, int m,
                                         const SweepOptions& options) {
    plan.validate();
    scene.validate();
    const int extra = history_depth(plan, scene, m);
    const auto phases = phases_with_history(plan, m, extra);
    return detail::correlate_point_with_phases(plan, scene, m, phases, extra, options);
}

double correlate_point_sampled(const SweepPlan& plan, const Scene& scene, int m,
                               double sample_rate_hz) {
    plan.validate();
    scene.validate();
    if (!(sample_rate_hz >= 8.0 * plan.carrier_hz)) {
        throw std::invalid_argument(
            "correlate_point_sampled: sample_rate_hz must be >= 8 * carrier_hz");
    }

    const double tau_m = coherence_time(plan, m);
    const double t_start = start_time(plan, m);
    const double window = static_cast<double>(plan.num_pulses) * tau_m;
    const auto schedule = make_phase_schedule(plan, m);
    const double w = plan.omega();

    const auto num_steps = static_cast<std::int64_t>(std::llround(window * sample_rate_hz));
    const double dt = window / static_cast<double>(num_steps);

    const double sigma_n =
        scene.noiseless() ? 0.0 : noise_std_from_snr(scene.noise_reference_amplitude(), *scene.snr);

    const auto last_pulse = static_cast<std::int64_t>(plan.num_pulses) - 1;
    auto transmit = [&](double t) {
        double rel = (t - t_start) / tau_m;
        auto n = static_cast<std::int64_t>(std::floor(rel));
        n = std::min(n, last_pulse); // close the final pulse at the window end
        return std::cos(w * t + schedule.phase(n));
    };
    auto echo = [&](double t) {
        double value = 0.0;
        for (const Target& target : scene.targets) {
            const double delay =
                target.delay_s() + 2.0 * target.radial_velocity_mps / kSpeedOfLight * t;
            const double te = t - delay;
            const auto n = static_cast<std::int64_t>(std::floor((te - t_start) / tau_m));
            value += target.attenuation * std::cos(w * te + schedule.phase(std::min(n, last_pulse)));
        }
        return value;
    };

    double sum = 0.0;
    for (std::int64_t j = 0; j <= num_steps; ++j) {
        const double t = t_start + static_cast<double>(j) * dt;
        double rx = echo(t);
        if (sigma_n > 0.0) {
            rx += sigma_n * rng::gaussian(scene.noise_seed, rng::kSampleNoiseDomain,
                                          static_cast<std::uint64_t>(m),
                                          static_cast<std::uint64_t>(j));
        }
        const double f = transmit(t) * rx;
        sum += (j == 0 || j == num_steps) ? 0.5 * f : f;
    }
    return sum * dt / window + scene.dc_bias;
}

namespace {

SweepRecord init_record(const SweepPlan& plan, const Scene& scene, const SweepOptions& options) {
    plan.validate();
    scene.validate();
    if (options.mode == CorrelatorMode::kSampled &&
        !(options.sample_rate_hz >= 8.0 * plan.carrier_hz)) {
        throw std::invalid_argument("run_sweep: sampled mode needs sample_rate_hz >= 8 * carrier");
    }
    SweepRecord record;
    record.plan = plan;
    record.scene = scene;
    const auto m_count = static_cast<std::size_t>(plan.num_points);
    record.l_m.resize(m_count);
    record.c_raw.resize(m_count);
    record.c_norm.resize(m_count);
    if (options.keep_slow_time && options.mode == CorrelatorMode::kSemiAnalytic) {
        record.slow_time.resize(m_count);
    }
    return record;
}

void fill_point(SweepRecord& record, const SweepPlan& plan, const Scene& scene,
                const SweepOptions& options, int m) {
    const auto idx = static_cast<std::size_t>(m);
    record.l_m[idx] = kSpeedOfLight * coherence_time(plan, m);
    if (options.mode == CorrelatorMode::kSemiAnalytic) {
        PointResult point = correlate_point_semianalytic(plan, scene, m, options);
        record.c_raw[idx] = point.c_raw;
        if (!record.slow_time.empty()) record.slow_time[idx] = std::move(point.slow_time);
    } else {
        record.c_raw[idx] = correlate_point_sampled(plan, scene, m, options.sample_rate_hz);
    }
    record.c_norm[idx] = record.l_m[idx] * record.c_raw[idx];
}

} // namespace

SweepRecord run_sweep_serial(const SweepPlan& plan, const Scene& scene,
                             const SweepOptions& options) {
    SweepRecord record = init_record(plan, scene, options);
    for (int m = 0; m < plan.num_points; ++m) {
        fill_point(record, plan, scene, options, m);
    }
    return record;
}

SweepRecord run_sweep(const SweepPlan& plan, const Scene& scene, const SweepOptions& options) {
    SweepRecord record = init_record(plan, scene, options);
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int m = 0; m < plan.num_points; ++m) {
        fill_point(record, plan, scene, options, m);
    }
    return record;
}

MonteCarloResult monte_carlo_sweeps(const SweepPlan& plan, const Scene& scene, int trials,
                                    const SweepOptions& options) {
    plan.validate();
    scene.validate();
    if (trials < 1) throw std::invalid_argument("monte_carlo_sweeps: trials must be >= 1");

    MonteCarloResult result;
    const auto m_count = static_cast<std::size_t>(plan.num_points);
    result.l_m.resize(m_count);
    for (int m = 0; m < plan.num_points; ++m) {
        result.l_m[static_cast<std::size_t>(m)] = kSpeedOfLight * coherence_time(plan, m);
    }
    result.trial_c_norm.assign(static_cast<std::size_t>(trials), {});

    SweepOptions trial_options = options;
    trial_options.keep_slow_time = false;

    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int t = 0; t < trials; ++t) {
        SweepPlan trial_plan = plan;
        trial_plan.seed = rng::trial_seed(plan.seed, static_cast<std::uint64_t>(t));
        Scene trial_scene = scene;
        trial_scene.noise_seed = rng::trial_seed(scene.noise_seed, static_cast<std::uint64_t>(t));
        result.trial_c_norm[static_cast<std::size_t>(t)] =
            run_sweep_serial(trial_plan, trial_scene, trial_options).c_norm;
    }

    result.mean_c_norm.assign(m_count, 0.0);
    result.std_c_norm.assign(m_count, 0.0);
    for (const auto& trial : result.trial_c_norm) {
        for (std::size_t i = 0; i < m_count; ++i) result.mean_c_norm[i] += trial[i];
    }
    for (std::size_t i = 0; i < m_count; ++i) {
        result.mean_c_norm[i] /= static_cast<double>(trials);
    }
    if (trials > 1) {
        for (const auto& trial : result.trial_c_norm) {
            for (std::size_t i = 0; i < m_count; ++i) {
                const double d = trial[i] - result.mean_c_norm[i];
                result.std_c_norm[i] += d * d;
            }
        }
        for (std::size_t i = 0; i < m_count; ++i) {
            result.std_c_norm[i] = std::sqrt(result.std_c_norm[i] / static_cast<double>(trials - 1));
        }
    }
    return result;
}

} // namespace cohradar
