#pragma once

#include <complex>
#include <vector>

#include "cohradar/scene.hpp"
#include "cohradar/waveform.hpp"

namespace cohradar {

enum class CorrelatorMode {
    kSemiAnalytic, // exact per-segment cosine-product integrals, no time grid
    kSampled,      // trapezoid quadrature of the sampled product (oracle)
};

struct SweepOptions {
    CorrelatorMode mode = CorrelatorMode::kSemiAnalytic;
    bool include_double_freq = true; // keep the 2*omega integral terms
    bool keep_slow_time = false;     // record per-pulse outputs (I + iQ)
    double sample_rate_hz = 0.0;     // sampled mode only; >= 8 * carrier
    int threads = 0;                 // 0 = library default
};

// One cross-correlation sweep. c_norm[m] = l_m[m] * c_raw[m] bit-exactly.
struct SweepRecord {
    SweepPlan plan;
    Scene scene;
    std::vector<double> l_m;    // coherence lengths, meters
    std::vector<double> c_raw;  // C_m
    std::vector<double> c_norm; // C~_m = l_m * C_m
    // Per-pulse integrated outputs (in-phase + i*quadrature), filled when
    // SweepOptions::keep_slow_time is set.
    std::vector<std::vector<std::complex<double>>> slow_time;
};

struct PointResult {
    double c_raw = 0.0;
    std::vector<std::complex<double>> slow_time;
};

// Mixer-and-average receiver output for sweep point m, by exact integration
// of the transmit x echo product over each constant-phase sub-segment.
// Moving targets follow the per-pulse freeze model: the window gate uses the
// delay accumulated over completed sweep points, the integrand phase advances
// by 2*k*v*tau_m per pulse.
PointResult correlate_point_semianalytic(const SweepPlan& plan, const Scene& scene, int m,
                                         const SweepOptions& options = {});

// Brute-force oracle: trapezoid average of transmit x receive over
// [T_m, T_m + N*tau_m] at sample_rate_hz (must be >= 8 * carrier).
double correlate_point_sampled(const SweepPlan& plan, const Scene& scene, int m,
                               double sample_rate_hz);

// Evaluates every sweep point. Points are independent given the seeds, so the
// parallel version distributes them over an OpenMP pool; results are keyed by
// m and bit-identical to the serial reference for any thread count.
SweepRecord run_sweep(const SweepPlan& plan, const Scene& scene, const SweepOptions& options = {});
SweepRecord run_sweep_serial(const SweepPlan& plan, const Scene& scene,
                             const SweepOptions& options = {});

struct MonteCarloResult {
    std::vector<double> l_m;
    std::vector<double> mean_c_norm; // sample mean of C~ per point
    std::vector<double> std_c_norm;  // unbiased sample std of C~ per point
    std::vector<std::vector<double>> trial_c_norm; // [trial][m]
};

// Repeats the sweep with per-trial derived seeds (trials are parallelized;
// the merge order is deterministic).
MonteCarloResult monte_carlo_sweeps(const SweepPlan& plan, const Scene& scene, int trials,
                                    const SweepOptions& options = {});

namespace detail {

// Semi-analytic point evaluation against a caller-supplied phase sequence
// (index 0 maps to pulse -extra_history, so phases.size() must be
// N + extra_history). Used by tests to force degenerate schedules.
PointResult correlate_point_with_phases(const SweepPlan& plan, const Scene& scene, int m,
                                        const std::vector<double>& phases, int extra_history,
                                        const SweepOptions& options);

// Exact integral of cos(w t + a) * cos(w (t - tau) + b) over [t1, t2].
double cos_cos_integral(double w, double a, double b, double tau, double t1, double t2,
                        bool with_double_freq);
// Exact integral of sin(w t + a) * cos(w (t - tau) + b) over [t1, t2].
double sin_cos_integral(double w, double a, double b, double tau, double t1, double t2,
                        bool with_double_freq);

} // namespace detail

} // namespace cohradar
