#include "cohradar/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace cohradar {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

Periodogram periodogram(std::span<const double> samples, double sample_rate_hz) {
    if (samples.size() < 2) throw std::invalid_argument("periodogram: needs at least 2 samples");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("periodogram: fs must be > 0");

    const std::size_t n = samples.size();
    const std::size_t n_out = n / 2 + 1;

    std::vector<double> in(samples.begin(), samples.end());
    std::vector<fftw_complex> out(n_out);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                              FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    Periodogram result;
    result.frequency_hz.resize(n_out);
    result.psd.resize(n_out);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < n_out; ++k) {
        result.frequency_hz[k] = sample_rate_hz * static_cast<double>(k) / static_cast<double>(n);
        double p = (out[k][0] * out[k][0] + out[k][1] * out[k][1]) * scale;
        // Fold the negative frequencies so the one-sided total keeps Parseval.
        const bool interior = k != 0 && !(n % 2 == 0 && k == n_out - 1);
        if (interior) p *= 2.0;
        result.psd[k] = p;
    }
    return result;
}

std::vector<std::complex<double>> fft_complex(std::span<const std::complex<double>> input,
                                              std::size_t nfft) {
    if (nfft < input.size()) throw std::invalid_argument("fft_complex: nfft < input size");
    std::vector<std::complex<double>> buffer(nfft, 0.0);
    std::copy(input.begin(), input.end(), buffer.begin());
    std::vector<std::complex<double>> out(nfft);
    {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(nfft),
                                          reinterpret_cast<fftw_complex*>(buffer.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()),
                                          FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    return out;
}

double measure_null_to_null(const Periodogram& psd) {
    const auto& p = psd.psd;
    if (p.size() < 16) return 0.0;
    const std::size_t peak =
        static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    const double peak_power = p[peak];
    if (!(peak_power > 0.0)) return 0.0;

    // Walk outward from the peak; the null is the running minimum once the
    // curve has dropped well below the first sidelobe and risen again.
    auto find_null = [&](int direction) -> std::ptrdiff_t {
        double valley = peak_power;
        std::ptrdiff_t valley_at = -1;
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(peak) + direction;
             i >= 0 && i < static_cast<std::ptrdiff_t>(p.size()); i += direction) {
            const double v = p[static_cast<std::size_t>(i)];
            if (v < valley) {
                valley = v;
                valley_at = i;
            } else if (valley < 0.02 * peak_power && v > 4.0 * valley) {
                return valley_at;
            }
        }
        return -1;
    };

    const std::ptrdiff_t left = find_null(-1);
    const std::ptrdiff_t right = find_null(+1);
    if (left < 0 || right < 0) return 0.0;
    return psd.frequency_hz[static_cast<std::size_t>(right)] -
           psd.frequency_hz[static_cast<std::size_t>(left)];
}

SpectrumMeasurement measure_point_spectrum(const SweepPlan& plan, int m, double sample_rate_hz,
                                           int pulses_per_segment, int num_segments) {
    plan.validate();
    if (!(sample_rate_hz > 2.0 * plan.carrier_hz)) {
        throw std::invalid_argument("measure_point_spectrum: fs must exceed 2 * carrier_hz");
    }
    if (pulses_per_segment < 1 || num_segments < 1) {
        throw std::invalid_argument("measure_point_spectrum: segment shape must be positive");
    }
    const int pulses_needed = pulses_per_segment * num_segments;
    if (pulses_needed > plan.num_pulses) {
        throw std::invalid_argument("measure_point_spectrum: plan has only " +
                                    std::to_string(plan.num_pulses) + " pulses, needs " +
                                    std::to_string(pulses_needed));
    }

    const auto schedule = make_phase_schedule(plan, m);
    const double tau_m = schedule.pulse_duration_s;
    const double seg_duration = static_cast<double>(pulses_per_segment) * tau_m;
    const auto seg_samples = static_cast<std::size_t>(std::floor(seg_duration * sample_rate_hz));
    const double dt = 1.0 / sample_rate_hz;

    SpectrumMeasurement result;
    result.expected_width_hz = 2.0 / tau_m;

    std::vector<double> samples(seg_samples);
    for (int seg = 0; seg < num_segments; ++seg) {
        // Segments start on pulse boundaries so each averages the same
        // rectangular-pulse line shape and the spectral nulls stay put.
        const double t0 =
            schedule.start_time_s + static_cast<double>(seg) * seg_duration;
        for (std::size_t i = 0; i < seg_samples; ++i) {
            samples[i] = sample_signal(schedule, plan.carrier_hz, t0 + static_cast<double>(i) * dt);
        }
        Periodogram seg_psd = periodogram(samples, sample_rate_hz);
        if (seg == 0) {
            result.psd = std::move(seg_psd);
        } else {
            for (std::size_t i = 0; i < result.psd.psd.size(); ++i) {
                result.psd.psd[i] += seg_psd.psd[i];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(num_segments);
    for (double& v : result.psd.psd) v *= inv;

    for (const double v : result.psd.psd) result.total_power += v;
    const std::size_t peak = static_cast<std::size_t>(
        std::max_element(result.psd.psd.begin(), result.psd.psd.end()) - result.psd.psd.begin());
    result.peak_frequency_hz = result.psd.frequency_hz[peak];
    result.null_to_null_hz = measure_null_to_null(result.psd);
    return result;
}

} // namespace cohradar
