#include "cohradar/scene.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cohradar/rng.hpp"

namespace cohradar {

void Target::validate() const {
    if (!(roundtrip_length_m > 0.0)) {
        throw std::invalid_argument("target.roundtrip_length_m must be > 0");
    }
    if (!(attenuation > 0.0 && attenuation <= 1.0)) {
        throw std::invalid_argument("target.attenuation must be in (0, 1]");
    }
    if (!(std::abs(radial_velocity_mps) < 1.0e3)) {
        throw std::invalid_argument("target.radial_velocity_mps must satisfy |v| < 1e3");
    }
}

void Scene::validate() const {
    for (const Target& t : targets) t.validate();
    if (snr.has_value() && !(*snr > 0.0)) {
        throw std::invalid_argument("scene.snr must be > 0 (or \"noiseless\")");
    }
    if (!std::isfinite(dc_bias)) {
        throw std::invalid_argument("scene.dc_bias must be finite");
    }
}

double Scene::noise_reference_amplitude() const {
    double sum_sq = 0.0;
    for (const Target& t : targets) sum_sq += t.attenuation * t.attenuation;
    return targets.empty() ? 1.0 : std::sqrt(sum_sq);
}

double noise_std_from_snr(double attenuation, double snr) {
    if (!(snr > 0.0)) throw std::invalid_argument("noise_std_from_snr: snr must be > 0");
    return attenuation / std::sqrt(2.0 * snr);
}

double received_sample(const Scene& scene, const PhaseSchedule& schedule, double carrier_hz,
                       double t, std::uint64_t noise_index) {
    double value = 0.0;
    for (const Target& target : scene.targets) {
        const double delay =
            target.delay_s() + 2.0 * target.radial_velocity_mps / kSpeedOfLight * t;
        value += target.attenuation * sample_signal_extended(schedule, carrier_hz, t - delay);
    }
    if (!scene.noiseless()) {
        const double sigma = noise_std_from_snr(scene.noise_reference_amplitude(), *scene.snr);
        value += sigma * rng::gaussian(scene.noise_seed, rng::kSampleNoiseDomain,
                                       schedule.sweep_index, noise_index);
    }
    return value;
}

} // namespace cohradar
