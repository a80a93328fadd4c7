#include "cohradar/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "cohradar/analytic.hpp"
#include "cohradar/errors.hpp"
#include "cohradar/spectrum.hpp"

namespace cohradar {

namespace {

struct OlsResult {
    double slope = 0.0;
    double intercept = 0.0;
    double sse = 0.0;
};

// Ordinary least squares over indices [begin, end); two-pass centering for
// numerical stability. with_slope = false fits a constant.
OlsResult ols_segment(std::span<const double> xs, std::span<const double> ys, int begin, int end,
                      bool with_slope) {
    const int n = end - begin;
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (int i = begin; i < end; ++i) {
        mean_x += xs[static_cast<std::size_t>(i)];
        mean_y += ys[static_cast<std::size_t>(i)];
    }
    mean_x /= n;
    mean_y /= n;

    OlsResult fit;
    if (!with_slope || n < 2) {
        fit.intercept = mean_y;
        for (int i = begin; i < end; ++i) {
            const double r = ys[static_cast<std::size_t>(i)] - mean_y;
            fit.sse += r * r;
        }
        return fit;
    }

    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = begin; i < end; ++i) {
        const double dx = xs[static_cast<std::size_t>(i)] - mean_x;
        const double dy = ys[static_cast<std::size_t>(i)] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = mean_y - fit.slope * mean_x;
    for (int i = begin; i < end; ++i) {
        const double r = ys[static_cast<std::size_t>(i)] -
                         (fit.slope * xs[static_cast<std::size_t>(i)] + fit.intercept);
        fit.sse += r * r;
    }
    return fit;
}

struct SplitResult {
    int index = -1; // first data index of the right piece
    double sse = std::numeric_limits<double>::infinity();
};

bool segment_has_slope(int begin, const FitOptions& options) {
    return options.allow_baseline_slope || begin != 0;
}

// Best two-piece split of [begin, end). Ties break to the smallest index.
SplitResult best_split(std::span<const double> xs, std::span<const double> ys, int begin, int end,
                       const FitOptions& options, std::vector<int>* evaluated) {
    SplitResult best;
    const int lo = begin + options.min_points_per_segment;
    const int hi = end - options.min_points_per_segment;
    for (int j = lo; j <= hi; ++j) {
        if (evaluated) evaluated->push_back(j);
        const OlsResult left = ols_segment(xs, ys, begin, j, segment_has_slope(begin, options));
        const OlsResult right = ols_segment(xs, ys, j, end, true);
        const double sse = left.sse + right.sse;
        if (sse < best.sse) {
            best.index = j;
            best.sse = sse;
        }
    }
    return best;
}

double total_sse(std::span<const double> xs, std::span<const double> ys,
                 const std::vector<int>& bounds, const FitOptions& options) {
    double sse = 0.0;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        sse += ols_segment(xs, ys, bounds[s], bounds[s + 1],
                           segment_has_slope(bounds[s], options))
                   .sse;
    }
    return sse;
}

// Breakpoint abscissa: intersection of the two neighbouring fitted lines,
// clamped to the grid cell [x[j-1], x[j]] of the winning split index j.
double breakpoint_abscissa(std::span<const double> xs, const OlsResult& left,
                           const OlsResult& right, int j) {
    const double cell_lo = xs[static_cast<std::size_t>(j - 1)];
    const double cell_hi = xs[static_cast<std::size_t>(j)];
    const double denom = left.slope - right.slope;
    double x = 0.5 * (cell_lo + cell_hi);
    if (denom != 0.0) {
        x = (right.intercept - left.intercept) / denom;
        if (!std::isfinite(x)) x = 0.5 * (cell_lo + cell_hi);
    }
    return std::clamp(x, cell_lo, cell_hi);
}

void check_fit_inputs(std::span<const double> xs, std::span<const double> ys, int segments,
                      const FitOptions& options) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit: xs and ys sizes differ");
    const int need = segments * options.min_points_per_segment;
    if (static_cast<int>(xs.size()) < need) {
        throw std::invalid_argument("fit: needs at least " + std::to_string(need) + " points");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw std::invalid_argument("fit: xs must be strictly increasing");
        }
    }
}

} // namespace

double single_line_sse(std::span<const double> xs, std::span<const double> ys) {
    check_fit_inputs(xs, ys, 1, FitOptions{.min_points_per_segment = 2});
    return ols_segment(xs, ys, 0, static_cast<int>(xs.size()), true).sse;
}

BreakpointFit fit_k_breakpoints(std::span<const double> xs, std::span<const double> ys, int k,
                                const FitOptions& options) {
    if (k < 1) throw std::invalid_argument("fit_k_breakpoints: k must be >= 1");
    check_fit_inputs(xs, ys, k + 1, options);
    const int n = static_cast<int>(xs.size());

    BreakpointFit fit;
    std::vector<int> bounds = {0, n};

    for (int step = 0; step < k; ++step) {
        // Globally best single insertion across current segments.
        int seg_best = -1;
        SplitResult split_best;
        double gain_best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
            const int begin = bounds[s];
            const int end = bounds[s + 1];
            if (end - begin < 2 * options.min_points_per_segment) continue;
            const double before =
                ols_segment(xs, ys, begin, end, segment_has_slope(begin, options)).sse;
            const SplitResult split =
                best_split(xs, ys, begin, end, options, &fit.candidate_grid);
            if (split.index < 0) continue;
            const double gain = before - split.sse;
            if (gain > gain_best) {
                gain_best = gain;
                seg_best = static_cast<int>(s);
                split_best = split;
            }
        }
        if (seg_best < 0) {
            throw NumericalError("fit_k_breakpoints: grid cannot host " + std::to_string(k) +
                                 " breakpoints with " +
                                 std::to_string(options.min_points_per_segment) +
                                 " points per segment");
        }
        bounds.insert(bounds.begin() + seg_best + 1, split_best.index);

        // Repartition: re-estimate each break inside its neighbourhood while
        // the others stay fixed. Never increases the SSE since the current
        // split is among the candidates.
        for (std::size_t b = 1; b + 1 < bounds.size(); ++b) {
            const SplitResult redo =
                best_split(xs, ys, bounds[b - 1], bounds[b + 1], options, nullptr);
            if (redo.index >= 0) bounds[b] = redo.index;
        }
    }

    fit.sse = total_sse(xs, ys, bounds, options);
    std::vector<OlsResult> pieces;
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        pieces.push_back(
            ols_segment(xs, ys, bounds[s], bounds[s + 1], segment_has_slope(bounds[s], options)));
        fit.segments.push_back({pieces.back().slope, pieces.back().intercept, bounds[s],
                                bounds[s + 1]});
    }
    for (std::size_t b = 1; b + 1 < bounds.size(); ++b) {
        fit.breakpoints.push_back(
            breakpoint_abscissa(xs, pieces[b - 1], pieces[b], bounds[b]));
    }
    return fit;
}

BreakpointFit fit_single_breakpoint(std::span<const double> xs, std::span<const double> ys,
                                    const FitOptions& options) {
    return fit_k_breakpoints(xs, ys, 1, options);
}

int detect_breakpoint_count(std::span<const double> xs, std::span<const double> ys, int max_k,
                            double f_threshold, const FitOptions& options) {
    check_fit_inputs(xs, ys, 1, options);
    const int n = static_cast<int>(xs.size());
    double sse_prev =
        ols_segment(xs, ys, 0, n, segment_has_slope(0, options)).sse;
    int accepted = 0;
    for (int k = 1; k <= max_k; ++k) {
        const int params = 2 * (k + 1) + k;
        if (n - params < 1 || n < (k + 1) * options.min_points_per_segment) break;
        BreakpointFit fit;
        try {
            fit = fit_k_breakpoints(xs, ys, k, options);
        } catch (const NumericalError&) {
            break;
        }
        const double denom = fit.sse / static_cast<double>(n - params);
        // One extra break spends 3 degrees of freedom: slope, intercept, knot.
        const double f = denom > 0.0 ? ((sse_prev - fit.sse) / 3.0) / denom
                                     : std::numeric_limits<double>::infinity();
        if (!(f > f_threshold)) break;
        accepted = k;
        sse_prev = fit.sse;
    }
    return accepted;
}

RangeReport ranges_from_fit(const BreakpointFit& fit, double delay_offset_m) {
    if (delay_offset_m < 0.0) {
        throw std::invalid_argument("ranges_from_fit: delay_offset_m must be >= 0");
    }
    RangeReport report;
    for (const double b : fit.breakpoints) {
        if (b < delay_offset_m) {
            throw NumericalError("ranges_from_fit: breakpoint " + std::to_string(b) +
                                 " m lies before the delay offset (negative range)");
        }
        report.ranges_m.push_back(0.5 * (b - delay_offset_m));
    }
    for (std::size_t i = 1; i < fit.breakpoints.size(); ++i) {
        report.separations_m.push_back(0.5 * (fit.breakpoints[i] - fit.breakpoints[i - 1]));
    }
    return report;
}

std::pair<double, double> accuracy_from_trials(std::span<const double> breakpoint_samples_m) {
    if (breakpoint_samples_m.size() < 2) {
        throw std::invalid_argument("accuracy_from_trials: needs at least 2 trials");
    }
    double mean = 0.0;
    for (const double b : breakpoint_samples_m) mean += b;
    mean /= static_cast<double>(breakpoint_samples_m.size());
    double var = 0.0;
    for (const double b : breakpoint_samples_m) var += (b - mean) * (b - mean);
    var /= static_cast<double>(breakpoint_samples_m.size() - 1);
    // Physical range is half the round-trip breakpoint.
    return {0.5 * mean, 0.5 * std::sqrt(var)};
}

namespace {

// A coherent slow-time tone must stand this far above the mean spectral
// power; calibrated against pure uncorrelated-window sweeps (a 5000-pulse
// noise spectrum peaks near 12x mean).
constexpr double kToneDetectionRatio = 20.0;

} // namespace

double max_unambiguous_velocity(double tau_m_s, double carrier_hz) {
    return kSpeedOfLight / (4.0 * carrier_hz * tau_m_s);
}

VelocityEstimate estimate_velocity(std::span<const std::complex<double>> slow_time,
                                   double tau_m_s, double carrier_hz) {
    if (slow_time.size() < 8) {
        throw std::invalid_argument("estimate_velocity: needs at least 8 slow-time samples");
    }
    if (!(tau_m_s > 0.0) || !(carrier_hz > 0.0)) {
        throw std::invalid_argument("estimate_velocity: tau_m and carrier must be > 0");
    }
    const std::size_t n = slow_time.size();
    std::size_t nfft = 1024;
    while (nfft < 16 * n) nfft *= 2;

    const auto spectrum = fft_complex(slow_time, nfft);
    double mean_power = 0.0;
    double peak_power = 0.0;
    std::size_t peak_index = 0;
    for (std::size_t i = 0; i < nfft; ++i) {
        const double p = std::norm(spectrum[i]);
        mean_power += p;
        if (p > peak_power) {
            peak_power = p;
            peak_index = i;
        }
    }
    mean_power /= static_cast<double>(nfft);

    VelocityEstimate estimate;
    estimate.peak_to_mean = mean_power > 0.0 ? peak_power / mean_power : 0.0;
    estimate.detected = estimate.peak_to_mean > kToneDetectionRatio;
    if (!estimate.detected) return estimate;

    // Sub-bin peak location by parabolic interpolation on the power of the
    // neighbouring (heavily oversampled) bins.
    auto power_at = [&](std::ptrdiff_t i) {
        const auto wrapped = static_cast<std::size_t>(
            (i + static_cast<std::ptrdiff_t>(nfft)) % static_cast<std::ptrdiff_t>(nfft));
        return std::norm(spectrum[wrapped]);
    };
    const auto p = static_cast<std::ptrdiff_t>(peak_index);
    const double alpha = power_at(p - 1);
    const double beta = power_at(p);
    const double gamma = power_at(p + 1);
    const double curvature = alpha - 2.0 * beta + gamma;
    double offset = curvature != 0.0 ? 0.5 * (alpha - gamma) / curvature : 0.0;
    offset = std::clamp(offset, -0.5, 0.5);

    const auto half = static_cast<std::ptrdiff_t>(nfft / 2);
    auto signed_index = static_cast<std::ptrdiff_t>(peak_index);
    if (signed_index > half) signed_index -= static_cast<std::ptrdiff_t>(nfft);
    double delta_phi = kTwoPi * (static_cast<double>(signed_index) + offset) /
                       static_cast<double>(nfft);
    if (delta_phi > kPi) delta_phi -= kTwoPi;
    if (delta_phi <= -kPi) delta_phi += kTwoPi;

    estimate.phase_step_rad = delta_phi;
    const double k = kTwoPi * carrier_hz / kSpeedOfLight;
    estimate.velocity_mps = delta_phi / (2.0 * k * tau_m_s);
    estimate.aliased = std::abs(delta_phi) > 0.9 * kPi;
    return estimate;
}

MovingTargetFit fit_moving_target(std::span<const double> l_m, std::span<const double> c_norm,
                                  const SweepPlan& plan, double initial_breakpoint_m,
                                  double max_speed_mps) {
    if (l_m.size() != c_norm.size() || l_m.size() < 8) {
        throw std::invalid_argument("fit_moving_target: needs matching grids of >= 8 points");
    }
    const double k = plan.wavenumber();
    const int n_pulses = plan.num_pulses;
    const std::size_t n = l_m.size();

    auto evaluate = [&](double l, double v, double* scale_out) {
        double gy = 0.0;
        double gg = 0.0;
        std::vector<double> g(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double m_index = plan.delta_tau_s > 0.0 ? static_cast<double>(i) : 0.0;
            // attenuation 2 makes the closed form (l_m - l) cos(...) kernel
            // with unit amplitude; the overall scale is fit linearly.
            g[i] = smt_mean(l_m[i], l, 2.0, k, v, n_pulses, m_index);
            gy += g[i] * c_norm[i];
            gg += g[i] * g[i];
        }
        const double scale = gg > 0.0 ? gy / gg : 0.0;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = c_norm[i] - scale * g[i];
            sse += r * r;
        }
        if (scale_out) *scale_out = scale;
        return sse;
    };

    MovingTargetFit best;
    best.sse = std::numeric_limits<double>::infinity();
    double span_l = 1.0;
    double span_v = max_speed_mps;
    double center_l = initial_breakpoint_m;
    double center_v = 0.0;
    for (int round = 0; round < 4; ++round) {
        for (int il = -10; il <= 10; ++il) {
            const double l = center_l + span_l * static_cast<double>(il) / 10.0;
            if (!(l > 0.0)) continue;
            for (int iv = -10; iv <= 10; ++iv) {
                const double v = center_v + span_v * static_cast<double>(iv) / 10.0;
                double scale = 0.0;
                const double sse = evaluate(l, v, &scale);
                if (sse < best.sse) {
                    best = {l, v, scale, sse};
                }
            }
        }
        center_l = best.roundtrip_length_m;
        center_v = best.velocity_mps;
        span_l *= 0.2;
        span_v *= 0.2;
    }
    return best;
}

} // namespace cohradar
