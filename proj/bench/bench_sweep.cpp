// Times the OpenMP sweep kernel against the serial reference and checks that
// the two produce identical records.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "cohradar/correlator.hpp"

using namespace cohradar;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    int num_points = 200;
    int num_pulses = 2000;
    if (argc > 1) num_points = std::atoi(argv[1]);
    if (argc > 2) num_pulses = std::atoi(argv[2]);

    SweepPlan plan;
    plan.tau0_s = 22.0 / kSpeedOfLight;
    plan.delta_tau_s = 5.0 / kSpeedOfLight;
    plan.num_points = num_points;
    plan.num_pulses = num_pulses;
    plan.carrier_hz = 2.4e9;
    plan.seed = 7;

    Scene scene;
    scene.targets.push_back({24.0, 1.0, 0.0});
    scene.targets.push_back({25.8, 0.8, 0.0});
    scene.snr = 1000.0;
    scene.noise_seed = 11;

    SweepOptions options;

    std::printf("sweep: M=%d N=%d, %zu targets, %d thread(s) available\n", num_points, num_pulses,
                scene.targets.size(), omp_get_max_threads());

    auto t0 = std::chrono::steady_clock::now();
    const SweepRecord serial = run_sweep_serial(plan, scene, options);
    const double t_serial = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const SweepRecord parallel = run_sweep(plan, scene, options);
    const double t_parallel = seconds_since(t0);

    double max_diff = 0.0;
    for (int m = 0; m < num_points; ++m) {
        max_diff = std::max(max_diff,
                            std::abs(serial.c_norm[static_cast<std::size_t>(m)] -
                                     parallel.c_norm[static_cast<std::size_t>(m)]));
    }

    std::printf("serial   : %8.3f ms\n", 1e3 * t_serial);
    std::printf("parallel : %8.3f ms  (speedup %.2fx)\n", 1e3 * t_parallel,
                t_serial / t_parallel);
    std::printf("max |serial - parallel| = %g %s\n", max_diff,
                max_diff == 0.0 ? "(bit-identical)" : "(MISMATCH)");
    return max_diff == 0.0 ? 0 : 1;
}
