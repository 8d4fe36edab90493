#include "granular/dsmc.hpp"

#include <algorithm>
#include <cmath>

namespace granular
{

namespace
{
constexpr std::size_t pilot_pairs = 1024;
constexpr int max_redos = 16;

void draw_pair(std::size_t n, Rng& rng, std::size_t& i, std::size_t& j)
{
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_int_distribution<std::size_t> second(0, n - 2);
    i = first(rng);
    j = second(rng);
    if (j >= i)
        ++j;
}

double relative_speed(VelocityEnsemble const& ens, std::size_t i, std::size_t j, double* u)
{
    auto vi = ens.velocity(i);
    auto vj = ens.velocity(j);
    double s = 0;
    for (int k = 0; k < ens.dim(); ++k)
    {
        u[k] = vi[k] - vj[k];
        s += u[k] * u[k];
    }
    return std::sqrt(s);
}
}  // namespace

void refresh_majorant(VelocityEnsemble const& ens, Majorant& maj, Rng& rng)
{
    // Rounding in |v_i - v_j| may exceed the exact triangle bound by ulps.
    maj.u_max = 2 * max_speed(ens) * (1 + 1e-12);
    if (maj.speed_count >= 100)
    {
        maj.u_mean = maj.speed_sum / static_cast<double>(maj.speed_count);
    }
    else if (maj.u_mean == 0)
    {
        std::vector<double> u(ens.dim());
        double sum = 0;
        for (std::size_t p = 0; p < pilot_pairs; ++p)
        {
            std::size_t i, j;
            draw_pair(ens.size(), rng, i, j);
            sum += relative_speed(ens, i, j, u.data());
        }
        maj.u_mean = sum / pilot_pairs;
    }
    maj.speed_sum = 0;
    maj.speed_count = 0;
    maj.steps_since_refresh = 0;
}

void UndoLog::rollback(VelocityEnsemble& ens) const
{
    std::size_t const dim = static_cast<std::size_t>(ens.dim());
    for (std::size_t r = index.size(); r-- > 0;)
    {
        auto v = ens.velocity(index[r]);
        std::copy_n(old.begin() + static_cast<std::ptrdiff_t>(r * dim), dim, v.begin());
    }
}

StepReport collision_substep(VelocityEnsemble& ens,
                             KernelConfig const& config,
                             Rng& rng,
                             Majorant& maj,
                             double rate,
                             double dt,
                             double& remainder,
                             UndoLog& undo,
                             CollisionObserver const& observer)
{
    std::size_t const n = ens.size();
    int const dim = ens.dim();
    double const start_remainder = remainder;
    std::uniform_real_distribution<double> uniform;
    std::vector<double> u(dim), u_hat(dim), omega(dim);
    std::vector<CollisionEvent> events;

    StepReport report;
    for (int attempt = 0;; ++attempt)
    {
        if (attempt > max_redos)
            throw InternalError("collision_substep: majorant refresh did not converge");
        undo.clear();
        events.clear();
        report.candidates = 0;
        report.accepted = 0;
        report.delta_energy = 0;

        double const expected
            = 0.5 * static_cast<double>(n) * rate * maj.u_max * dt + start_remainder;
        auto const m = static_cast<std::uint64_t>(std::floor(expected));
        remainder = expected - static_cast<double>(m);

        bool breach = false;
        double breach_speed = 0;
        for (std::uint64_t c = 0; c < m; ++c)
        {
            std::size_t i, j;
            draw_pair(n, rng, i, j);
            double const u_mag = relative_speed(ens, i, j, u.data());
            maj.speed_sum += u_mag;
            ++maj.speed_count;
            ++report.candidates;
            if (u_mag > maj.u_max)
            {
                breach = true;
                breach_speed = u_mag;
                break;
            }
            if (!(uniform(rng) * maj.u_max < u_mag))
                continue;

            for (int k = 0; k < dim; ++k)
                u_hat[k] = u[k] / u_mag;
            sample_omega(u_hat, config.b1, rng, omega);

            auto vi = ens.velocity(i);
            auto vj = ens.velocity(j);
            undo.index.push_back(i);
            undo.old.insert(undo.old.end(), vi.begin(), vi.end());
            undo.index.push_back(j);
            undo.old.insert(undo.old.end(), vj.begin(), vj.end());

            double const de = collide_in_place(vi, vj, omega, config.e);
            report.delta_energy += de;
            ++report.accepted;
            if (observer)
                events.push_back({i, j, u_mag, de});
        }
        if (!breach)
            break;
        undo.rollback(ens);
        ++report.majorant_redos;
        refresh_majorant(ens, maj, rng);
        maj.u_max = std::max(maj.u_max, 1.25 * breach_speed);
    }
    report.delta_energy /= static_cast<double>(n);
    for (auto const& ev : events)
        observer(ev);
    return report;
}

std::uint64_t collision_stream_seed(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      0x6a09e667u};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

DsmcState DsmcState::create(KernelConfig config,
                            VelocityEnsemble ens,
                            std::uint64_t seed,
                            DsmcOptions options)
{
    config.validate();
    if (ens.dim() != config.dim)
        throw InputError("ensemble dimension does not match kernel dimension");
    if (!(options.c_target > 0))
        throw InputError("c_target must be positive");
    if (options.refresh_interval == 0)
        throw InputError("refresh_interval must be positive");

    DsmcState s{std::move(ens),
                0.0,
                std::move(config),
                options,
                Majorant{},
                MomentSeries(0),
                Rng(collision_stream_seed(seed)),
                0,
                0,
                0.0,
                0.0,
                UndoLog{}};
    MomentRecord rec = measure(s.ens, 0.0, 0, 0.0);
    s.energy = rec.E;
    s.stats = MomentSeries(s.ens.dim());
    s.stats.append(std::move(rec));
    refresh_majorant(s.ens, s.majorant, s.rng);
    return s;
}

StepReport dsmc_step(DsmcState& state, double dt, CollisionObserver const& observer)
{
    if (!(dt > 0))
        throw PreconditionError("dsmc_step: dt must be positive");
    if (!(state.energy > 0))
        throw PreconditionError("dsmc_step: energy must be positive");

    if (state.majorant.steps_since_refresh >= state.options.refresh_interval)
        refresh_majorant(state.ens, state.majorant, state.rng);

    double const lambda = std::pow(state.energy, -state.config.a);
    StepReport report = collision_substep(state.ens,
                                          state.config,
                                          state.rng,
                                          state.majorant,
                                          lambda,
                                          dt,
                                          state.ntc_remainder,
                                          state.last_step,
                                          observer);
    ++state.majorant.steps_since_refresh;
    ++state.steps;
    state.t += dt;
    state.n_collisions += report.accepted;
    MomentRecord rec = measure(state.ens, state.t, state.n_collisions, dt);
    state.energy = rec.E;
    state.stats.append(std::move(rec));
    return report;
}

double choose_dt(DsmcState const& state, double c_target)
{
    if (!(state.energy > 0))
        throw PreconditionError("choose_dt: energy must be positive");
    double const lambda = std::pow(state.energy, -state.config.a);
    return c_target / (lambda * state.majorant.u_mean);
}

std::string to_string(HaltReason r)
{
    return r == HaltReason::blow_up_resolved ? "blow-up-resolved" : "horizon";
}

PhysicalRun run_physical(KernelConfig const& config,
                         std::size_t n,
                         std::uint64_t seed,
                         double epsilon_stop,
                         double t_max,
                         DsmcOptions const& options,
                         SnapshotCallback const& snapshot)
{
    if (!(epsilon_stop > 0 && epsilon_stop < 1))
        throw InputError("epsilon_stop must lie in (0,1)");
    if (!(t_max > 0))
        throw InputError("t_max must be positive");

    DsmcState state = DsmcState::create(
        config, init_ensemble(n, config.dim, options.init, seed), seed, options);
    double c_eff = options.c_target;
    HaltReason halt;
    if (snapshot && options.snapshot_stride > 0)
        snapshot(state);

    for (;;)
    {
        if (state.energy < epsilon_stop)
        {
            halt = HaltReason::blow_up_resolved;
            break;
        }
        if (state.t >= t_max * (1 - 1e-14))
        {
            halt = HaltReason::horizon;
            break;
        }
        double dt = std::min(choose_dt(state, c_eff), t_max - state.t);
        double const e_before = state.energy;
        dsmc_step(state, dt);

        auto const& rec = state.stats.back();
        bool finite = std::isfinite(rec.E);
        for (double p : rec.p)
            finite = finite && std::isfinite(p);
        if (!finite)
        {
            VelocityEnsemble last_good = state.ens;
            state.last_step.rollback(last_good);
            throw CorruptedStateError("non-finite velocity after step "
                                          + std::to_string(state.steps),
                                      std::move(last_good),
                                      state.t - dt);
        }
        if (std::fabs(state.energy - e_before) > options.max_energy_change * e_before)
            c_eff *= 0.5;
        if (snapshot && options.snapshot_stride > 0
            && state.steps % options.snapshot_stride == 0)
            snapshot(state);
    }
    return PhysicalRun{state.stats, std::move(state), halt};
}

}  // namespace granular
