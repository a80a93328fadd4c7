#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cohradar/constants.hpp"

namespace cohradar {

// Parameters of one coherence-length sweep: the pulse duration (coherence
// time) steps from tau0 to tau0 + delta_tau over num_points settings, holding
// each setting for num_pulses random-phase pulses of the carrier.
struct SweepPlan {
    double tau0_s = 0.0;      // shortest coherence time
    double delta_tau_s = 0.0; // swept coherence-time span
    int num_points = 0;       // M, coherence settings in the sweep
    int num_pulses = 0;       // N, phase jumps per setting
    double carrier_hz = 2.4e9;
    std::uint64_t seed = 1;

    double omega() const { return kTwoPi * carrier_hz; }
    double wavenumber() const { return omega() / kSpeedOfLight; }
    double start_length_m() const { return kSpeedOfLight * tau0_s; }
    double span_length_m() const { return kSpeedOfLight * delta_tau_s; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
    // Non-fatal advisories, e.g. fewer than 10 carrier cycles per pulse.
    std::vector<std::string> warnings() const;
};

// The phase sequence of one sweep point. phases[n] is cached for n in
// [0, num_pulses); phase(n) also serves negative (phantom) indices from the
// same counter-based stream, extending the pulse train into the past.
struct PhaseSchedule {
    std::vector<double> phases;
    double pulse_duration_s = 0.0; // tau_m
    double start_time_s = 0.0;     // T_m
    std::uint64_t seed = 0;
    std::uint32_t sweep_index = 0;

    double phase(std::int64_t n) const;
    double end_time_s() const {
        return start_time_s + static_cast<double>(phases.size()) * pulse_duration_s;
    }
};

// tau_m = tau0 + m * delta_tau / (M - 1); valid m in [0, M-1].
double coherence_time(const SweepPlan& plan, int m);

// Seconds elapsed from scan start to the beginning of sweep point m,
// T_m = N * sum_{q<m} tau_q. Accepts m in [0, M]; m = M gives the total
// duration of the scan.
double start_time(const SweepPlan& plan, int m);

PhaseSchedule make_phase_schedule(const SweepPlan& plan, int m);

// cos(omega*t + phi(t)) inside the transmission window of the schedule.
// Pulse intervals are left-closed: a boundary instant takes the new phase.
double sample_signal(const PhaseSchedule& schedule, double carrier_hz, double t);

// Same waveform with the pulse train extended to phantom indices n < 0;
// used to evaluate echoes whose emission predates the window.
double sample_signal_extended(const PhaseSchedule& schedule, double carrier_hz, double t);

} // namespace cohradar
