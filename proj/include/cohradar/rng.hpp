#pragma once

#include <cmath>
#include <cstdint>

#include "cohradar/constants.hpp"

// Counter-based random streams. Every draw is a pure function of
// (seed, domain, a, b), so any value can be regenerated without producing
// its predecessors and parallel evaluation order does not matter.
// Distinct domain tags keep the phase and noise streams independent.

namespace cohradar::rng {

inline constexpr std::uint64_t kPhaseDomain = 0x70686173652d3144ull;
inline constexpr std::uint64_t kPointNoiseDomain = 0x6e6f6973652d3150ull;
inline constexpr std::uint64_t kPulseNoiseDomain = 0x6e6f6973652d3251ull;
inline constexpr std::uint64_t kSampleNoiseDomain = 0x6e6f6973652d3352ull;
inline constexpr std::uint64_t kTrialDomain = 0x747269616c2d3453ull;

inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix(seed);
    h = splitmix(h ^ domain);
    h = splitmix(h ^ a);
    h = splitmix(h ^ b);
    return h;
}

// Uniform in [0, 1) with 53 significant bits.
inline double to_unit(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b) {
    return to_unit(key(seed, domain, a, b));
}

// Uniform phase in [0, 2*pi). Index n may be negative (phantom pulses that
// model the steady-state pre-window signal); the two's-complement cast keeps
// negative indices on distinct counters.
inline double phase(std::uint64_t seed, std::uint32_t sweep_index, std::int64_t pulse_index) {
    return kTwoPi * uniform(seed, kPhaseDomain, sweep_index, static_cast<std::uint64_t>(pulse_index));
}

// Standard normal via Box-Muller on two counter values.
inline double gaussian(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b) {
    const double u1 = uniform(seed, domain, a, 2 * b);
    const double u2 = uniform(seed, domain, a, 2 * b + 1);
    const double r = std::sqrt(-2.0 * std::log1p(-u1)); // log1p avoids log(0)
    return r * std::cos(kTwoPi * u2);
}

// Derives an independent sub-seed for Monte Carlo trial t.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return key(seed, kTrialDomain, trial, 0);
}

} // namespace cohradar::rng
