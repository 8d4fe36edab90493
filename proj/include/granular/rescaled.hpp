#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "granular/dsmc.hpp"
#include "granular/ensemble.hpp"
#include "granular/kernel.hpp"

namespace granular
{

//! Exact anti-drift flow over ds: every velocity multiplied by exp(tau ds).
void drift_step(VelocityEnsemble& ens, double tau, double ds);

struct RescaledOptions
{
    //! Expected collisions per particle per substep.
    double c_target = 0.05;
    //! Relative energy input per substep allowed from the drift.
    double max_energy_change = 0.01;
    std::size_t refresh_interval = 50;
    //! Spacing in s between moment records.
    double record_interval = 1.0;
    std::size_t bins = 64;
    //! Upper edge of the speed histogram; 0 picks 4 sqrt(balance energy).
    double v_max = 0;
    InitialDistribution init = InitialDistribution::maxwellian;
    //! Keep one instantaneous histogram per record (for convergence fits).
    bool keep_histograms = false;
    double energy_floor = 1e-4;
    double energy_ceiling = 1e4;
};

struct RescaledRun
{
    MomentSeries series;
    //! Time average of the speed histogram over the final avg_window.
    ProfileHistogram profile;
    double c0_hat = 0;
    double c1_hat = 0;
    double stationarity_residual = 0;
    std::vector<ProfileHistogram> histograms;
    std::optional<VelocityEnsemble> final_ensemble;
    double v_max = 0;

    bool converged() const { return c0_hat > 0 && c1_hat >= c0_hat; }
};

/*!
 * Solve ∂g/∂s + τ∇·(wg) = Q_e(g,g) by Lie splitting: an exact drift step
 * followed by a collision substep with unit rate factor.
 *
 * Throws DivergenceError when the energy leaves
 * [energy_floor, energy_ceiling].
 */
RescaledRun run_rescaled(KernelConfig const& config,
                         std::size_t n,
                         std::uint64_t seed,
                         double s_max,
                         double avg_window,
                         RescaledOptions const& options = {});

/*!
 * Max over the trailing window of the smoothed |dE/ds|.
 *
 * The derivative at each record is the least-squares slope over ten
 * consecutive records lying inside the window.
 */
double stationarity_residual(MomentSeries const& series, double window);

//! Σ|m1 - m2| + |overflow1 - overflow2|; bins must match exactly.
double l1_distance(ProfileHistogram const& h1, ProfileHistogram const& h2);

/*!
 * Stationary energy of the drift-collision balance 2τE = (1-e^2)/4 κ2 <|u|^3>
 * evaluated with Maxwellian moments. Returns +inf when no balance exists.
 */
double balance_energy_estimate(KernelConfig const& config);

}  // namespace granular
