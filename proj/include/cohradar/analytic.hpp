#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cohradar/correlator.hpp"
#include "cohradar/scene.hpp"

// Closed-form expectations and deviations of the normalized cross-correlation
// C~ = l_m * C_m, plus the sweep-time/bandwidth bookkeeping. These are the
// oracles the simulated sweeps are verified against.

namespace cohradar {

// Expected C~ for a single stationary target:
// (A/2) (l_m - l) cos(k l) once the coherence window spans the target, else 0.
double sst_mean(double l_m, double l, double attenuation, double k);

// Standard deviation of C_m (not scaled by l_m) for a single stationary
// target. snr = nullopt drops the noise-floor term.
double sst_std(double l_m, double l, double attenuation, int num_pulses,
               std::optional<double> snr);

// Multiple stationary targets: sum / root-sum-square of single-target terms.
double mst_mean(double l_m, std::span<const Target> targets, double k);
double mst_std(double l_m, std::span<const Target> targets, double k, int num_pulses,
               std::optional<double> snr);

// Single moving target. m_index is the sweep index at which l_m occurs,
// (M-1)(tau_m - tau0)/delta_tau (0 for a flat sweep). The Dirichlet factor
// sin(N x)/(N sin x) takes its limit value at the removable singularities.
double smt_mean(double l_m, double l, double attenuation, double k, double velocity_mps,
                int num_pulses, double m_index);

double dirichlet_kernel(int n, double x);

// T_tot = N * sum tau_m = (2 tau0 + delta_tau)/2 * N * M.
double total_sweep_time(double tau0_s, double delta_tau_s, int num_points, int num_pulses);
double total_sweep_time(const SweepPlan& plan);

// Null-to-null transmitted bandwidth, 2/tau0, and its algebraically
// equivalent sweep-time trade-off form 2 / (T_tot/(N M) - delta_tau/2).
double max_bandwidth(double tau0_s);
double tradeoff_bandwidth(double total_time_s, int num_pulses, int num_points,
                          double delta_tau_s);

// Extra bandwidth budget of a carrier hop sweep, 1/(2 tau0).
double carrier_hop_bandwidth(double tau0_s);

// Conventional pulsed/FMCW range resolution at equal bandwidth, c/(2 BW).
double baseline_resolution(double bandwidth_hz);

// Picks the candidate carrier maximizing min_i |cos(k l_i)| over the target
// round-trip lengths (avoids correlation nulls); ties go to the lowest
// frequency.
double pick_carrier(std::span<const double> candidates_hz,
                    std::span<const double> roundtrip_lengths_m);

// Expected C~ and its std on the sweep's own l_m grid, for point-wise
// comparison with a SweepRecord. Supports stationary scenes of any size and
// a single moving target; there is no closed form for several moving targets.
struct TheoryCurve {
    std::vector<double> l_m;
    std::vector<double> mean; // E[C~]
    std::vector<double> std;  // l_m * sigma_{C_m}
};

TheoryCurve theory_curve(const SweepPlan& plan, const Scene& scene);

} // namespace cohradar
