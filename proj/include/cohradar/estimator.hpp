#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "cohradar/waveform.hpp"

// Target recovery from a measured sweep: piecewise-linear breakpoint
// regression on C~ vs l_m, range/separation reporting, and slow-time Doppler.

namespace cohradar {

struct FitOptions {
    int min_points_per_segment = 3;
    // When false the leftmost segment is constrained to slope 0 (no
    // DC-leakage baseline assumed before the first breakpoint).
    bool allow_baseline_slope = true;
};

struct LinearSegment {
    double slope = 0.0;
    double intercept = 0.0;
    int begin = 0; // first data index of the segment
    int end = 0;   // one past the last data index
};

struct BreakpointFit {
    std::vector<double> breakpoints;      // abscissas, strictly increasing
    std::vector<LinearSegment> segments;  // breakpoints.size() + 1 pieces
    double sse = 0.0;                     // total residual sum of squares
    std::vector<int> candidate_grid;      // split indices evaluated
};

// Exhaustive two-segment least squares: every interior split leaving
// min_points_per_segment on each side is evaluated; the breakpoint is the
// intersection abscissa of the winning pair of lines, clamped to the grid
// cell of the winning split. Ties break to the smallest split index.
BreakpointFit fit_single_breakpoint(std::span<const double> xs, std::span<const double> ys,
                                    const FitOptions& options = {});

// Sequential multi-break estimation: repeatedly insert the globally best
// split, then one repartition pass re-estimating each break with its
// neighbours held fixed.
BreakpointFit fit_k_breakpoints(std::span<const double> xs, std::span<const double> ys, int k,
                                const FitOptions& options = {});

double single_line_sse(std::span<const double> xs, std::span<const double> ys);

// F-ratio threshold for declaring a breakpoint significant, calibrated on
// null-scene Monte Carlo (false-positive rate < 1% for sweeps of 100..500
// points; see test_estimator.cpp for the calibration harness).
inline constexpr double kDetectionFThreshold = 12.0;

// Scans k = 0..max_k, keeping each additional break only while its F-ratio
// against the simpler fit clears the threshold. Returns the accepted count.
int detect_breakpoint_count(std::span<const double> xs, std::span<const double> ys, int max_k,
                            double f_threshold = kDetectionFThreshold,
                            const FitOptions& options = {});

struct RangeReport {
    std::vector<double> ranges_m;      // physical, (break - offset) / 2
    std::vector<double> separations_m; // consecutive break gaps / 2
    std::vector<double> accuracy_m;    // per-break std over trials (physical)
    int trials = 1;
};

RangeReport ranges_from_fit(const BreakpointFit& fit, double delay_offset_m);

// Mean and unbiased std of repeated-trial breakpoint samples, converted to
// physical range meters (halved). Requires at least two samples.
std::pair<double, double> accuracy_from_trials(std::span<const double> breakpoint_samples_m);

struct VelocityEstimate {
    bool detected = false;     // a coherent slow-time tone stood out
    double velocity_mps = 0.0; // signed; positive recedes
    double phase_step_rad = 0.0; // per-pulse advance, in (-pi, pi]
    bool aliased = false;      // estimate at the edge of the unambiguous span
    double peak_to_mean = 0.0; // spectral peak vs mean power
};

// Doppler from the slow-time sequence of one sweep point: locates the peak
// of the (zero-padded) slow-time spectrum, refines the per-pulse phase step
// with a pulse-pair pass, and maps it through delta_phi = 2 k v tau_m.
VelocityEstimate estimate_velocity(std::span<const std::complex<double>> slow_time, double tau_m_s,
                                   double carrier_hz);

// Largest |v| with |delta_phi| < pi, i.e. c / (4 f tau_m).
double max_unambiguous_velocity(double tau_m_s, double carrier_hz);

struct MovingTargetFit {
    double roundtrip_length_m = 0.0;
    double velocity_mps = 0.0;
    double scale = 0.0; // fitted A/2 cos-amplitude factor
    double sse = 0.0;
};

// Optional refinement for moving targets: fits the oscillatory closed-form
// sweep model with (l, v) free (coarse grid + local shrink), seeded by a
// piecewise-linear breakpoint estimate.
MovingTargetFit fit_moving_target(std::span<const double> l_m, std::span<const double> c_norm,
                                  const SweepPlan& plan, double initial_breakpoint_m,
                                  double max_speed_mps = 80.0);

} // namespace cohradar
