#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cohradar/waveform.hpp"

namespace cohradar {

struct Periodogram {
    std::vector<double> frequency_hz; // one-sided grid, DC..Nyquist
    std::vector<double> psd;          // sums to the mean square of the input
};

// One-sided magnitude-squared spectrum, normalized so that the total
// spectral power equals the mean square of the samples (Parseval).
Periodogram periodogram(std::span<const double> samples, double sample_rate_hz);

// Forward complex DFT, zero-padded to nfft (power of two >= input size).
std::vector<std::complex<double>> fft_complex(std::span<const std::complex<double>> input,
                                              std::size_t nfft);

struct SpectrumMeasurement {
    Periodogram psd;                // segment-averaged spectrum
    double total_power = 0.0;       // integrated PSD (= mean square)
    double peak_frequency_hz = 0.0; // carrier estimate
    double null_to_null_hz = 0.0;   // measured width; 0 if nulls not found
    double expected_width_hz = 0.0; // 2 / tau_m
};

// Synthesizes sweep point m, splits it into pulse-aligned rectangular
// segments and averages their periodograms, then measures the null-to-null
// width of the main lobe. Segment boundaries stay on pulse boundaries so the
// expected spectrum keeps its true nulls at carrier +- 1/tau_m.
SpectrumMeasurement measure_point_spectrum(const SweepPlan& plan, int m, double sample_rate_hz,
                                           int pulses_per_segment = 128, int num_segments = 32);

// First deep spectral valley on each side of the main peak; returns 0 when
// no valley is found.
double measure_null_to_null(const Periodogram& psd);

} // namespace cohradar
