#include "cohradar/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohradar {

double sst_mean(double l_m, double l, double attenuation, double k) {
    if (l_m <= l) return 0.0;
    return 0.5 * attenuation * (l_m - l) * std::cos(k * l);
}

double sst_std(double l_m, double l, double attenuation, int num_pulses,
               std::optional<double> snr) {
    const double jitter_ratio = l_m > l ? l / l_m : 1.0;
    double variance = jitter_ratio * jitter_ratio / (2.0 * static_cast<double>(num_pulses));
    if (snr.has_value()) variance += 1.0 / *snr;
    return 0.5 * attenuation * std::sqrt(variance);
}

double mst_mean(double l_m, std::span<const Target> targets, double k) {
    double sum = 0.0;
    for (const Target& t : targets) {
        sum += sst_mean(l_m, t.roundtrip_length_m, t.attenuation, k);
    }
    return sum;
}

double mst_std(double l_m, std::span<const Target> targets, double k, int num_pulses,
               std::optional<double> snr) {
    (void)k;
    double variance = 0.0;
    for (const Target& t : targets) {
        const double s = sst_std(l_m, t.roundtrip_length_m, t.attenuation, num_pulses, snr);
        variance += s * s;
    }
    return std::sqrt(variance);
}

double dirichlet_kernel(int n, double x) {
    const double sx = std::sin(x);
    if (std::abs(sx) < 1.0e-9) {
        // Removable singularity at multiples of pi; the limit is +-1.
        return std::cos(static_cast<double>(n) * x) / std::cos(x);
    }
    return std::sin(static_cast<double>(n) * x) / (static_cast<double>(n) * sx);
}

double smt_mean(double l_m, double l, double attenuation, double k, double velocity_mps,
                int num_pulses, double m_index) {
    const double v_over_c = velocity_mps / kSpeedOfLight;
    const double n = static_cast<double>(num_pulses);
    const double window_edge = l + 2.0 * m_index * n * v_over_c * l_m;
    if (!(l_m > window_edge)) return 0.0;
    const double phase = k * (l + (n - 1.0) * v_over_c * l_m);
    const double kernel = dirichlet_kernel(num_pulses, k * l_m * v_over_c);
    return 0.5 * attenuation * (l_m - l) * std::cos(phase) * kernel;
}

double total_sweep_time(double tau0_s, double delta_tau_s, int num_points, int num_pulses) {
    if (num_points == 1) return static_cast<double>(num_pulses) * tau0_s; // single setting
    return 0.5 * (2.0 * tau0_s + delta_tau_s) * static_cast<double>(num_pulses) *
           static_cast<double>(num_points);
}

double total_sweep_time(const SweepPlan& plan) {
    return total_sweep_time(plan.tau0_s, plan.delta_tau_s, plan.num_points, plan.num_pulses);
}

double max_bandwidth(double tau0_s) {
    if (!(tau0_s > 0.0)) throw std::domain_error("max_bandwidth: tau0 must be > 0");
    return 2.0 / tau0_s;
}

double tradeoff_bandwidth(double total_time_s, int num_pulses, int num_points,
                          double delta_tau_s) {
    const double denom = total_time_s / (static_cast<double>(num_pulses) *
                                         static_cast<double>(num_points)) -
                         0.5 * delta_tau_s;
    if (!(denom > 0.0)) {
        throw std::domain_error("tradeoff_bandwidth: T_tot/(N M) - delta_tau/2 must be > 0");
    }
    return 2.0 / denom;
}

double carrier_hop_bandwidth(double tau0_s) {
    if (!(tau0_s > 0.0)) throw std::domain_error("carrier_hop_bandwidth: tau0 must be > 0");
    return 0.5 / tau0_s;
}

double baseline_resolution(double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::domain_error("baseline_resolution: bandwidth must be > 0");
    return kSpeedOfLight / (2.0 * bandwidth_hz);
}

double pick_carrier(std::span<const double> candidates_hz,
                    std::span<const double> roundtrip_lengths_m) {
    if (candidates_hz.empty()) throw std::invalid_argument("pick_carrier: no candidates");
    double best_hz = candidates_hz.front();
    double best_score = -1.0;
    for (const double f : candidates_hz) {
        const double k = kTwoPi * f / kSpeedOfLight;
        double score = 1.0;
        for (const double l : roundtrip_lengths_m) {
            score = std::min(score, std::abs(std::cos(k * l)));
        }
        if (score > best_score || (score == best_score && f < best_hz)) {
            best_score = score;
            best_hz = f;
        }
    }
    return best_hz;
}

TheoryCurve theory_curve(const SweepPlan& plan, const Scene& scene) {
    plan.validate();
    scene.validate();

    std::size_t moving = 0;
    for (const Target& t : scene.targets) {
        if (t.radial_velocity_mps != 0.0) ++moving;
    }
    if (moving > 0 && scene.targets.size() > 1) {
        throw std::invalid_argument(
            "theory_curve: no closed form for several targets with motion");
    }

    const double k = plan.wavenumber();
    TheoryCurve curve;
    const auto m_count = static_cast<std::size_t>(plan.num_points);
    curve.l_m.resize(m_count);
    curve.mean.resize(m_count);
    curve.std.resize(m_count);
    for (int m = 0; m < plan.num_points; ++m) {
        const auto i = static_cast<std::size_t>(m);
        const double l_m = kSpeedOfLight * coherence_time(plan, m);
        curve.l_m[i] = l_m;
        double mean;
        if (moving == 1) {
            const Target& t = scene.targets.front();
            const double m_index = plan.delta_tau_s > 0.0 ? static_cast<double>(m) : 0.0;
            mean = smt_mean(l_m, t.roundtrip_length_m, t.attenuation, k, t.radial_velocity_mps,
                            plan.num_pulses, m_index);
        } else {
            mean = mst_mean(l_m, scene.targets, k);
        }
        curve.mean[i] = mean + scene.dc_bias * l_m;

        // Target motion leaves the deviation unchanged; a free-space scan
        // still carries the receiver noise floor at the unit reference.
        double sigma;
        if (scene.targets.empty()) {
            sigma = scene.noiseless() ? 0.0 : 0.5 * std::sqrt(1.0 / *scene.snr);
        } else {
            sigma = mst_std(l_m, scene.targets, k, plan.num_pulses, scene.snr);
        }
        curve.std[i] = l_m * sigma;
    }
    return curve;
}

} // namespace cohradar
