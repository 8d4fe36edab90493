#include "granular/rescaled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/analysis.hpp"
#include "granular/errors.hpp"

namespace granular
{

void drift_step(VelocityEnsemble& ens, double tau, double ds)
{
    if (!(ds > 0))
        throw PreconditionError("drift_step: ds must be positive");
    if (!(tau >= 0))
        throw PreconditionError("drift_step: tau must be >= 0");
    if (tau == 0)
        return;
    ens.scale(std::exp(tau * ds));
}

double balance_energy_estimate(KernelConfig const& config)
{
    int const d = config.dim;
    double const dissipation = (1 - config.e) * (1 + config.e);
    if (dissipation <= 0 || config.tau <= 0)
        return std::numeric_limits<double>::infinity();
    double const kappa2
        = sphere_integral([&](double x) { return x * x * config.b1(x); }, d);
    // <|u|^3> = K E^{3/2} for two independent Maxwellians of energy E.
    double const chi3 = std::pow(2.0, 1.5) * std::tgamma(0.5 * (d + 3)) / std::tgamma(0.5 * d);
    double const k = std::pow(2.0 / d, 1.5) * chi3;
    double const root = 8 * config.tau / (dissipation * kappa2 * k);
    return root * root;
}

RescaledRun run_rescaled(KernelConfig const& config,
                         std::size_t n,
                         std::uint64_t seed,
                         double s_max,
                         double avg_window,
                         RescaledOptions const& options)
{
    config.validate();
    if (!(avg_window > 0 && s_max > avg_window))
        throw InputError("run_rescaled: need s_max > avg_window > 0");
    if (!(options.record_interval > 0) || !(options.c_target > 0))
        throw InputError("run_rescaled: record_interval and c_target must be positive");

    VelocityEnsemble ens = init_ensemble(n, config.dim, options.init, seed);
    Rng rng(collision_stream_seed(seed));
    Majorant maj;
    refresh_majorant(ens, maj, rng);

    double v_max = options.v_max;
    if (v_max <= 0)
    {
        double const e_bal = balance_energy_estimate(config);
        v_max = 4 * std::sqrt(std::isfinite(e_bal) ? std::max(e_bal, 1.0) : 1.0);
    }

    RescaledRun run;
    run.v_max = v_max;
    run.series = MomentSeries(config.dim);
    run.series.append(measure(ens, 0.0, 0, 0.0));
    if (options.keep_histograms)
        run.histograms.push_back(radial_histogram(ens, options.bins, v_max));

    ProfileHistogram accum = make_histogram(options.bins, v_max);
    std::size_t n_accum = 0;
    double const avg_start = s_max - avg_window;

    double const drift_limit = config.tau > 0
                                   ? std::log1p(options.max_energy_change) / (2 * config.tau)
                                   : std::numeric_limits<double>::infinity();
    double s = 0;
    double energy = run.series.back().E;
    double remainder = 0;
    std::uint64_t n_coll = 0;
    std::size_t record_index = 1;
    UndoLog undo;

    while (s < s_max)
    {
        double const next_record
            = std::min(s_max, options.record_interval * static_cast<double>(record_index));
        double ds = std::min(drift_limit, options.c_target / maj.u_mean);
        bool const at_record = s + ds >= next_record;
        if (at_record)
            ds = next_record - s;

        if (maj.steps_since_refresh >= options.refresh_interval)
            refresh_majorant(ens, maj, rng);

        if (config.tau > 0)
        {
            double const f = std::exp(config.tau * ds);
            ens.scale(f);
            maj.u_max *= f;
            maj.u_mean *= f;
            maj.speed_sum *= f;
            energy *= f * f;
        }
        StepReport const rep
            = collision_substep(ens, config, rng, maj, 1.0, ds, remainder, undo);
        ++maj.steps_since_refresh;
        n_coll += rep.accepted;
        energy += rep.delta_energy;
        s = at_record ? next_record : s + ds;

        if (at_record)
        {
            MomentRecord rec = measure(ens, s, n_coll, ds);
            energy = rec.E;
            run.series.append(std::move(rec));
            ++record_index;
            if (options.keep_histograms || s >= avg_start - 1e-12)
            {
                ProfileHistogram h = radial_histogram(ens, options.bins, v_max);
                if (s >= avg_start - 1e-12)
                {
                    for (std::size_t b = 0; b < h.bins(); ++b)
                        accum.masses[b] += h.masses[b];
                    accum.overflow += h.overflow;
                    ++n_accum;
                }
                if (options.keep_histograms)
                    run.histograms.push_back(std::move(h));
            }
        }
        if (!(energy >= options.energy_floor && energy <= options.energy_ceiling))
            throw DivergenceError("rescaled energy left [" + std::to_string(options.energy_floor)
                                      + ", " + std::to_string(options.energy_ceiling)
                                      + "] at s = " + std::to_string(s),
                                  s,
                                  energy);
    }

    double const inv = 1.0 / static_cast<double>(std::max<std::size_t>(n_accum, 1));
    for (double& m : accum.masses)
        m *= inv;
    accum.overflow *= inv;
    accum.n_samples = n * n_accum;
    run.profile = std::move(accum);

    run.c0_hat = std::numeric_limits<double>::infinity();
    run.c1_hat = 0;
    for (auto const& r : run.series.records())
    {
        if (r.t < avg_start - 1e-12)
            continue;
        run.c0_hat = std::min(run.c0_hat, r.E);
        run.c1_hat = std::max(run.c1_hat, r.E);
    }
    run.stationarity_residual = stationarity_residual(run.series, avg_window);
    run.final_ensemble = std::move(ens);
    return run;
}

double stationarity_residual(MomentSeries const& series, double window)
{
    if (series.size() < 2)
        throw InputError("stationarity_residual: series too short");
    double const s_end = series.back().t;
    if (!(window > 0) || window > s_end - series[0].t + 1e-12)
        throw InputError("stationarity_residual: window longer than series");
    double const s_start = s_end - window;
    std::vector<double> s, e;
    for (auto const& r : series.records())
    {
        if (r.t >= s_start - 1e-12)
        {
            s.push_back(r.t);
            e.push_back(r.E);
        }
    }
    constexpr std::size_t span = 10;
    if (s.size() < span)
        throw InputError("stationarity_residual: window holds fewer than 10 records");
    double worst = 0;
    for (std::size_t j = 0; j + span <= s.size(); ++j)
    {
        LinearFit const fit = least_squares(std::span(s).subspan(j, span),
                                            std::span(e).subspan(j, span));
        worst = std::max(worst, std::fabs(fit.slope));
    }
    return worst;
}

double l1_distance(ProfileHistogram const& h1, ProfileHistogram const& h2)
{
    if (h1.bin_edges != h2.bin_edges || h1.masses.size() != h2.masses.size())
        throw InputError("l1_distance: histograms have different bins");
    double d = std::fabs(h1.overflow - h2.overflow);
    for (std::size_t b = 0; b < h1.masses.size(); ++b)
        d += std::fabs(h1.masses[b] - h2.masses[b]);
    return d;
}

}  // namespace granular
