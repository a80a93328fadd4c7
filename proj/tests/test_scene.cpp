#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "cohradar/rng.hpp"
#include "cohradar/scene.hpp"

using namespace cohradar;

namespace {

SweepPlan small_plan() {
    SweepPlan plan;
    plan.tau0_s = 26.0 / kSpeedOfLight;
    plan.delta_tau_s = 0.0;
    plan.num_points = 2;
    plan.num_pulses = 32;
    plan.carrier_hz = 2.4e9;
    plan.seed = 5;
    return plan;
}

} // namespace

TEST_CASE("noise_std_from_snr inverts the receive-channel SNR") {
    CHECK(noise_std_from_snr(1.0, 0.5) == doctest::Approx(1.0));
    CHECK(noise_std_from_snr(0.5, 1000.0) == doctest::Approx(0.011180).epsilon(1e-4));
    CHECK(noise_std_from_snr(1.0, 1e12) == doctest::Approx(0.0).epsilon(1e-5));
    CHECK_THROWS_AS((void)noise_std_from_snr(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)noise_std_from_snr(1.0, -3.0), std::invalid_argument);
}

TEST_CASE("target and scene validation") {
    Target ok{25.0, 1.0, 0.0};
    CHECK_NOTHROW(ok.validate());
    CHECK_THROWS_AS((Target{0.0, 1.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Target{25.0, 0.0, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Target{25.0, 1.2, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((Target{25.0, 1.0, 1e3}.validate()), std::invalid_argument);

    Scene bad;
    bad.snr = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("empty noiseless scene returns zero") {
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);
    Scene scene;
    for (int i = 0; i < 64; ++i) {
        const double t = sched.start_time_s + (i + 0.4) * sched.pulse_duration_s / 4.0;
        CHECK(received_sample(scene, sched, plan.carrier_hz, t) == 0.0);
    }
}

TEST_CASE("zero-delay unit target equals the transmit signal") {
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);
    Scene scene;
    scene.targets.push_back({1e-30, 1.0, 0.0}); // vanishing delay
    for (int i = 0; i < 200; ++i) {
        const double t = sched.start_time_s + (i + 0.7) * sched.pulse_duration_s / 7.0;
        CHECK(received_sample(scene, sched, plan.carrier_hz, t) ==
              doctest::Approx(sample_signal(sched, plan.carrier_hz, t)).epsilon(1e-9));
    }
}

TEST_CASE("echo phase windows follow the delayed pulse train") {
    // target at l = 25 m, coherence window 26 m: within transmit pulse n the
    // first tau seconds carry the previous pulse's phase, the rest carry the
    // current one.
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);
    Scene scene;
    scene.targets.push_back({25.0, 0.8, 0.0});
    const double tau = scene.targets[0].delay_s();
    const double tau_m = sched.pulse_duration_s;
    const double w = plan.omega();

    for (int n = 2; n < 6; ++n) {
        const double pulse_start = sched.start_time_s + n * tau_m;
        const double t_uncorrelated = pulse_start + 0.5 * tau;
        const double expected_unc =
            0.8 * std::cos(w * (t_uncorrelated - tau) + sched.phases[static_cast<std::size_t>(n - 1)]);
        CHECK(received_sample(scene, sched, plan.carrier_hz, t_uncorrelated) ==
              doctest::Approx(expected_unc).epsilon(1e-9));

        const double t_correlated = pulse_start + tau + 0.5 * (tau_m - tau);
        const double expected_cor =
            0.8 * std::cos(w * (t_correlated - tau) + sched.phases[static_cast<std::size_t>(n)]);
        CHECK(received_sample(scene, sched, plan.carrier_hz, t_correlated) ==
              doctest::Approx(expected_cor).epsilon(1e-9));
    }

    // pulse 0 reaches into the phantom history
    const double t0 = sched.start_time_s + 0.5 * tau;
    const double expected_phantom = 0.8 * std::cos(w * (t0 - tau) + sched.phase(-1));
    CHECK(received_sample(scene, sched, plan.carrier_hz, t0) ==
          doctest::Approx(expected_phantom).epsilon(1e-9));
}

TEST_CASE("superposition is bit-exact in noiseless mode") {
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);

    Scene multi;
    multi.targets.push_back({23.0, 0.9, 0.0});
    multi.targets.push_back({25.0, 0.6, 0.0});
    multi.targets.push_back({30.5, 0.3, 0.0});

    for (int i = 0; i < 300; ++i) {
        const double t = sched.start_time_s + (i + 0.37) * sched.pulse_duration_s / 11.0;
        double sum = 0.0;
        for (const Target& target : multi.targets) {
            Scene single;
            single.targets.push_back(target);
            sum += received_sample(single, sched, plan.carrier_hz, t);
        }
        CHECK(received_sample(multi, sched, plan.carrier_hz, t) == sum);
    }
}

TEST_CASE("stationary echo is an exact time shift of the transmit signal") {
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);
    Scene scene;
    scene.targets.push_back({20.0, 0.7, 0.0});
    const double tau = scene.targets[0].delay_s();
    for (int i = 0; i < 200; ++i) {
        const double t = sched.start_time_s + tau + (i + 0.29) * sched.pulse_duration_s / 9.0;
        CHECK(received_sample(scene, sched, plan.carrier_hz, t) ==
              doctest::Approx(0.7 * sample_signal(sched, plan.carrier_hz, t - tau)).epsilon(1e-12));
    }
}

TEST_CASE("noise stream is independent of the phase stream") {
    constexpr std::size_t n = 100000;
    double sum_xy = 0.0;
    double sum_xx = 0.0;
    double sum_yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::cos(rng::phase(7, 0, static_cast<std::int64_t>(i)));
        const double y = rng::gaussian(7, rng::kSampleNoiseDomain, 0, i);
        sum_xy += x * y;
        sum_xx += x * x;
        sum_yy += y * y;
    }
    const double corr = sum_xy / std::sqrt(sum_xx * sum_yy);
    CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("noisy received samples are reproducible by noise index") {
    const SweepPlan plan = small_plan();
    const PhaseSchedule sched = make_phase_schedule(plan, 0);
    Scene scene;
    scene.targets.push_back({25.0, 1.0, 0.0});
    scene.snr = 100.0;
    scene.noise_seed = 77;
    const double t = sched.start_time_s + 3.3 * sched.pulse_duration_s;
    CHECK(received_sample(scene, sched, plan.carrier_hz, t, 5) ==
          received_sample(scene, sched, plan.carrier_hz, t, 5));
    CHECK(received_sample(scene, sched, plan.carrier_hz, t, 5) !=
          received_sample(scene, sched, plan.carrier_hz, t, 6));
}
