#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cohradar/waveform.hpp"

namespace cohradar {

// A point scatterer. roundtrip_length_m is the two-way path l = c*tau, so the
// physical range is l/2. Positive radial velocity recedes (delay grows).
struct Target {
    double roundtrip_length_m = 0.0;
    double attenuation = 1.0;
    double radial_velocity_mps = 0.0;

    double delay_s() const { return roundtrip_length_m / kSpeedOfLight; }

    void validate() const;
};

// Targets plus the noise model. snr is the linear receive-channel power
// ratio; nullopt means noiseless. dc_bias is an additive constant on the
// receiver output, modelling transmit/receive leakage (default off).
struct Scene {
    std::vector<Target> targets;
    std::optional<double> snr;
    std::uint64_t noise_seed = 0;
    double dc_bias = 0.0;

    void validate() const;

    bool noiseless() const { return !snr.has_value(); }

    // Amplitude the noise level is referenced to: sqrt(sum A_i^2), or 1 for a
    // free-space scan so that a pure-noise sweep still carries noise.
    double noise_reference_amplitude() const;
};

// Per-sample noise std realizing SNR = A^2 / (2 sigma^2) against a
// unit-amplitude carrier attenuated by A.
double noise_std_from_snr(double attenuation, double snr);

// Sum of delayed, attenuated echoes plus one noise draw. Echo delays follow
// tau_i(t) = tau_i + (2 v_i / c) * t with t measured from scan start; echoes
// emitted before the window use the schedule's phantom phases. noise_index
// selects the i.i.d. noise draw (stream keyed by (noise_seed, sweep_index,
// noise_index)); it is ignored for noiseless scenes.
double received_sample(const Scene& scene, const PhaseSchedule& schedule, double carrier_hz,
                       double t, std::uint64_t noise_index = 0);

} // namespace cohradar
