#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "granular/ensemble.hpp"
#include "granular/errors.hpp"
#include "granular/kernel.hpp"

namespace granular
{

//---------------------------------------------------------------------------//
// Collision machinery shared by the physical and rescaled solvers

//! Relative-speed bound used for acceptance-rejection of candidate pairs.
struct Majorant
{
    double u_max = 0;
    //! Estimate of the mean relative speed over uniformly drawn pairs.
    double u_mean = 0;
    std::size_t steps_since_refresh = 0;
    double speed_sum = 0;
    std::uint64_t speed_count = 0;
};

//! u_max = 2 max|v_i| (triangle bound on |v_i - v_j|); updates u_mean from the
//! candidate speeds seen since the last refresh, or from a pilot sample.
void refresh_majorant(VelocityEnsemble const& ens, Majorant& maj, Rng& rng);

//! Pre-collision velocities of particles touched during one substep.
struct UndoLog
{
    std::vector<std::size_t> index;
    std::vector<double> old;

    void clear()
    {
        index.clear();
        old.clear();
    }
    void rollback(VelocityEnsemble& ens) const;
};

struct CollisionEvent
{
    std::size_t i;
    std::size_t j;
    double u_mag;
    double delta_energy;  //!< |v'|^2 + |v*'|^2 - |v|^2 - |v*|^2
};
using CollisionObserver = std::function<void(CollisionEvent const&)>;

struct StepReport
{
    std::uint64_t candidates = 0;
    std::uint64_t accepted = 0;
    //! Sum of per-collision energy changes, in units of (1/N) Σ|v|^2.
    double delta_energy = 0;
    int majorant_redos = 0;
};

/*!
 * One no-time-counter collision substep over the whole ensemble.
 *
 * Draws floor(N rate u_max dt / 2 + remainder) candidate pairs (i != j,
 * uniform), accepts each with probability |u_ij|/u_max and collides the
 * accepted pairs with ω drawn from b1. A candidate with |u_ij| > u_max rolls
 * the substep back, refreshes the majorant and redoes it.
 */
StepReport collision_substep(VelocityEnsemble& ens,
                             KernelConfig const& config,
                             Rng& rng,
                             Majorant& maj,
                             double rate,
                             double dt,
                             double& remainder,
                             UndoLog& undo,
                             CollisionObserver const& observer = {});

//---------------------------------------------------------------------------//
// Physical-variable solver

struct DsmcOptions
{
    //! Expected collisions per particle per step.
    double c_target = 0.05;
    std::size_t refresh_interval = 50;
    //! Relative per-step energy change above which c_target is halved.
    double max_energy_change = 0.02;
    InitialDistribution init = InitialDistribution::maxwellian;
    //! Invoke the snapshot callback every this many steps (0 disables).
    std::size_t snapshot_stride = 0;
};

struct DsmcState
{
    VelocityEnsemble ens;
    double t = 0;
    KernelConfig config;
    DsmcOptions options;
    Majorant majorant;
    MomentSeries stats;
    Rng rng;
    std::uint64_t n_collisions = 0;
    std::uint64_t steps = 0;
    double ntc_remainder = 0;
    double energy = 0;
    UndoLog last_step;

    //! Validates config, records the t = 0 moments, primes the majorant.
    static DsmcState
    create(KernelConfig config, VelocityEnsemble ens, std::uint64_t seed, DsmcOptions options = {});
};

/*!
 * Advance by dt with the rate factor λ = E^{-a} frozen at step start.
 *
 * Appends one record to state.stats.
 */
StepReport dsmc_step(DsmcState& state, double dt, CollisionObserver const& observer = {});

//! dt = c_target / (λ ū) with ū the majorant's mean relative speed estimate.
double choose_dt(DsmcState const& state, double c_target);

enum class HaltReason
{
    blow_up_resolved,
    horizon
};
std::string to_string(HaltReason r);

class CorruptedStateError : public NumericalError
{
  public:
    CorruptedStateError(std::string const& what, VelocityEnsemble last_good, double t)
        : NumericalError(what), last_good_(std::move(last_good)), t_(t)
    {
    }
    VelocityEnsemble const& last_good() const { return last_good_; }
    double t() const { return t_; }

  private:
    VelocityEnsemble last_good_;
    double t_;
};

struct PhysicalRun
{
    MomentSeries series;
    DsmcState final_state;
    HaltReason halt;
};

using SnapshotCallback = std::function<void(DsmcState const&)>;

/*!
 * Run the cooling gas until E < epsilon_stop (blow-up resolved) or t_max.
 *
 * The initial ensemble is drawn from options.init with the given seed and
 * normalized to zero momentum and unit energy.
 */
PhysicalRun run_physical(KernelConfig const& config,
                         std::size_t n,
                         std::uint64_t seed,
                         double epsilon_stop,
                         double t_max,
                         DsmcOptions const& options = {},
                         SnapshotCallback const& snapshot = {});

//! Stream seed for collisions, decorrelated from the initial-condition stream.
std::uint64_t collision_stream_seed(std::uint64_t seed);

}  // namespace granular
