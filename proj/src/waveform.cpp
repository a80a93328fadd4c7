#include "cohradar/waveform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cohradar/rng.hpp"

namespace cohradar {

namespace {

void check_index(int m, int upper, const char* what) {
    if (m < 0 || m > upper) {
        throw std::out_of_range(std::string(what) + ": sweep index " + std::to_string(m) +
                                " outside [0, " + std::to_string(upper) + "]");
    }
}

} // namespace

void SweepPlan::validate() const {
    if (!(tau0_s > 0.0)) throw std::invalid_argument("plan.tau0_s must be > 0");
    if (!(delta_tau_s >= 0.0)) throw std::invalid_argument("plan.delta_tau_s must be >= 0");
    if (num_points < 2) throw std::invalid_argument("plan.num_points must be >= 2");
    if (num_pulses < 2) throw std::invalid_argument("plan.num_pulses must be >= 2");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("plan.carrier_hz must be > 0");
}

std::vector<std::string> SweepPlan::warnings() const {
    std::vector<std::string> notes;
    const double cycles = carrier_hz * tau0_s;
    if (cycles < 10.0) {
        notes.push_back("carrier_hz * tau0_s = " + std::to_string(cycles) +
                        " carrier cycles per pulse; the closed-form curves assume "
                        "omega * tau >> 1 (>= 10 recommended, >= 50 used in validation)");
    }
    return notes;
}

double coherence_time(const SweepPlan& plan, int m) {
    check_index(m, plan.num_points - 1, "coherence_time");
    if (plan.delta_tau_s == 0.0) return plan.tau0_s;
    return plan.tau0_s + static_cast<double>(m) * plan.delta_tau_s /
                             static_cast<double>(plan.num_points - 1);
}

double start_time(const SweepPlan& plan, int m) {
    check_index(m, plan.num_points, "start_time");
    // N * sum_{q<m} tau_q, summed in closed form (arithmetic series).
    const double n = static_cast<double>(plan.num_pulses);
    const double q = static_cast<double>(m);
    double sum = q * plan.tau0_s;
    if (plan.delta_tau_s != 0.0 && m > 1) {
        sum += plan.delta_tau_s * q * (q - 1.0) / (2.0 * static_cast<double>(plan.num_points - 1));
    }
    return n * sum;
}

double PhaseSchedule::phase(std::int64_t n) const {
    if (n >= 0 && n < static_cast<std::int64_t>(phases.size())) {
        return phases[static_cast<std::size_t>(n)];
    }
    return rng::phase(seed, sweep_index, n);
}

PhaseSchedule make_phase_schedule(const SweepPlan& plan, int m) {
    check_index(m, plan.num_points - 1, "make_phase_schedule");
    PhaseSchedule schedule;
    schedule.pulse_duration_s = coherence_time(plan, m);
    schedule.start_time_s = start_time(plan, m);
    schedule.seed = plan.seed;
    schedule.sweep_index = static_cast<std::uint32_t>(m);
    schedule.phases.resize(static_cast<std::size_t>(plan.num_pulses));
    for (int n = 0; n < plan.num_pulses; ++n) {
        schedule.phases[static_cast<std::size_t>(n)] = rng::phase(plan.seed, schedule.sweep_index, n);
    }
    return schedule;
}

namespace {

double sample_at_index(const PhaseSchedule& schedule, double carrier_hz, double t,
                       std::int64_t n) {
    return std::cos(kTwoPi * carrier_hz * t + schedule.phase(n));
}

} // namespace

double sample_signal(const PhaseSchedule& schedule, double carrier_hz, double t) {
    const double rel = t - schedule.start_time_s;
    const double window = static_cast<double>(schedule.phases.size()) * schedule.pulse_duration_s;
    if (rel < 0.0 || rel >= window) {
        throw std::domain_error("sample_signal: t outside the transmission window");
    }
    const auto n = static_cast<std::int64_t>(std::floor(rel / schedule.pulse_duration_s));
    return sample_at_index(schedule, carrier_hz, t, n);
}

double sample_signal_extended(const PhaseSchedule& schedule, double carrier_hz, double t) {
    const double rel = t - schedule.start_time_s;
    const double window = static_cast<double>(schedule.phases.size()) * schedule.pulse_duration_s;
    if (rel >= window) {
        throw std::domain_error("sample_signal_extended: t beyond the transmission window");
    }
    const auto n = static_cast<std::int64_t>(std::floor(rel / schedule.pulse_duration_s));
    return sample_at_index(schedule, carrier_hz, t, n);
}

} // namespace cohradar
