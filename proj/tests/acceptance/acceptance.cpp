// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "granular/analysis.hpp"
#include "granular/dsmc.hpp"
#include "granular/rescaled.hpp"
#include "granular/scaling.hpp"
#include "oracles.hpp"

using namespace granular;

namespace
{

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(char const* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

constexpr std::size_t n_particles = 20000;
constexpr std::uint64_t seed = 1;

// Moment series collected from every run for the moment-inequality check.
std::vector<MomentSeries> recorded;

//---------------------------------------------------------------------------//

Outcome collision_identities()
{
    Rng rng(20240601);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u01;
    double worst_energy = 0;
    double worst_momentum = 0;
    for (int it = 0; it < 1000000; ++it)
    {
        int const d = 2 + it % 3;
        double const e = u01(rng);
        double const scale = std::exp(6 * (u01(rng) - 0.5));
        std::vector<double> v(d), vs(d), om(d);
        for (int k = 0; k < d; ++k)
        {
            v[k] = scale * g(rng);
            vs[k] = scale * std::exp(2 * (u01(rng) - 0.5)) * g(rng);
        }
        sample_uniform_sphere(om, rng);
        auto out = collide(v, vs, om, e);

        long double dot = 0, e0 = 0, e1 = 0;
        for (int k = 0; k < d; ++k)
        {
            dot += (static_cast<long double>(v[k]) - vs[k]) * om[k];
            e0 += static_cast<long double>(v[k]) * v[k] + static_cast<long double>(vs[k]) * vs[k];
            e1 += static_cast<long double>(out.v_prime[k]) * out.v_prime[k]
                  + static_cast<long double>(out.vstar_prime[k]) * out.vstar_prime[k];
            // Momentum: the shared impulse leaves only the rounding of the two
            // outputs, at most half an ulp each.
            long double const residual = (static_cast<long double>(out.v_prime[k]) + out.vstar_prime[k])
                                         - (static_cast<long double>(v[k]) + vs[k]);
            double const a = std::fabs(out.v_prime[k]), b = std::fabs(out.vstar_prime[k]);
            double const bound = 0.5 * ((std::nextafter(a, INFINITY) - a) + (std::nextafter(b, INFINITY) - b));
            worst_momentum = std::max(worst_momentum, static_cast<double>(std::fabs(residual)) / bound);
        }
        long double const closed = -0.5L * (1 - static_cast<long double>(e) * e) * dot * dot;
        worst_energy = std::max(
            worst_energy, oracle::ulps_of(static_cast<double>((e1 - e0) - closed), static_cast<double>(e0)));
    }
    return {worst_momentum <= 1.0 && worst_energy <= 4.0,
            fmt("1e6 collisions: momentum residual %.3g x output rounding bound (<= 1), energy error %.3g ulp (<= 4)",
                worst_momentum, worst_energy)};
}

Outcome haff_law()
{
    auto run = run_physical(make_kernel_config(0.9, 0), n_particles, seed, 1e-6, 1000);
    recorded.push_back(run.series);
    auto f = fit_cooling(run.series, 0.0);
    bool const ok = std::fabs(f.exponent_hat + 2) <= 0.15 && f.r2 >= 0.99;
    return {ok, fmt("exponent %.4f (target -2 +- 0.15), r2 %.6f (>= 0.99), window [%.1f, %.1f]",
                    f.exponent_hat, f.r2, f.t_lo, f.t_hi)};
}

Outcome critical_regime()
{
    auto run = run_physical(make_kernel_config(0.9, 0.5), n_particles, seed, 1e-6, 150);
    recorded.push_back(run.series);
    auto f = fit_cooling(run.series, 0.5);
    double const e_lo = interpolate_energy(run.series, f.t_lo);
    double const e_hi = interpolate_energy(run.series, f.t_hi);
    double const efold = std::log(e_lo / e_hi);
    bool const ok = f.r2 >= 0.99 && efold >= 3;
    return {ok, fmt("log E linear with r2 %.6f (>= 0.99) over %.2f e-foldings (>= 3), rate %.4f",
                    f.r2, efold, -f.slope)};
}

Outcome super_critical()
{
    auto cfg = make_kernel_config(0.5, 1);
    auto loose = run_physical(cfg, n_particles, seed, 1e-4, 1e3);
    auto tight = run_physical(cfg, n_particles, seed, 1e-6, 1e3);
    recorded.push_back(loose.series);
    recorded.push_back(tight.series);
    auto fl = fit_cooling(loose.series, 1.0);
    auto ft = fit_cooling(tight.series, 1.0);
    bool const halted = loose.halt == HaltReason::blow_up_resolved && tight.halt == HaltReason::blow_up_resolved
                        && std::isfinite(tight.final_state.t);
    bool const have_tc = fl.Tc_hat && ft.Tc_hat;
    double const drift = have_tc ? std::fabs(*ft.Tc_hat - *fl.Tc_hat) / *fl.Tc_hat : INFINITY;
    bool const ok = halted && have_tc && fl.r2 >= 0.99 && ft.r2 >= 0.99 && drift <= 0.05;
    return {ok, fmt("r2 %.6f / %.6f (>= 0.99), Tc_hat %.4f -> %.4f (change %.2g%%, <= 5%%), halted at t = %.4f",
                    fl.r2, ft.r2, have_tc ? *fl.Tc_hat : NAN, have_tc ? *ft.Tc_hat : NAN, 100 * drift,
                    tight.final_state.t)};
}

Outcome rescaled_bounds()
{
    auto cfg = make_kernel_config(0.95, 0);
    cfg.tau = 0.05;
    auto r1 = run_rescaled(cfg, n_particles, seed, 200, 100);
    auto r2 = run_rescaled(cfg, n_particles, seed, 400, 200);
    recorded.push_back(r1.series);
    recorded.push_back(r2.series);
    double const ratio = r1.c1_hat / r1.c0_hat;
    bool const ok = r1.c0_hat > 0 && ratio < 2 && r2.stationarity_residual < r1.stationarity_residual;
    return {ok, fmt("band [%.4f, %.4f], c1/c0 = %.4f (< 2); residual %.4g at s_max 200 -> %.4g at 400",
                    r1.c0_hat, r1.c1_hat, ratio, r1.stationarity_residual, r2.stationarity_residual)};
}

Outcome frame_coupling()
{
    auto cfg = make_kernel_config(0.95, 0);
    auto phys = run_physical(cfg, n_particles, seed, 1e-6, 1000);
    auto map = build_scaling_map(phys.series, cfg.tau, cfg.a);
    double const s_max = std::ceil(map.T.back()) + 2;
    RescaledOptions opt;
    opt.record_interval = 0.5;
    auto resc = run_rescaled(cfg, n_particles, seed, s_max, 0.5 * s_max, opt);
    recorded.push_back(phys.series);
    recorded.push_back(resc.series);
    double const err = verify_energy_coupling(phys.series, resc.series, map);
    return {err <= 0.05, fmt("max |E(g)(T) - V^2 E(f)| / E(g) = %.4g (<= 0.05) over t in [0, 1000], T_end = %.2f",
                             err, map.T.back())};
}

Outcome moment_bound()
{
    auto cfg = make_kernel_config(0.9, 0);
    auto shorter = run_physical(cfg, n_particles, seed, 1e-6, 25);
    auto longer = run_physical(cfg, n_particles, seed, 1e-6, 50);
    recorded.push_back(longer.series);
    auto k1 = check_moment_bound(shorter.series);
    auto k2 = check_moment_bound(longer.series);
    double const growth = k2.kappa_hat / k1.kappa_hat;
    return {growth <= 1.2, fmt("kappa_hat %.5f (t_max 25) -> %.5f (t_max 50), ratio %.4f (<= 1.2)", k1.kappa_hat,
                               k2.kappa_hat, growth)};
}

Outcome attraction()
{
    auto cfg = make_kernel_config(0.95, 0);
    RescaledOptions opt;
    opt.keep_histograms = true;
    auto run = run_rescaled(cfg, n_particles, seed, 200, 100, opt);
    recorded.push_back(run.series);
    std::vector<double> s, l1;
    for (std::size_t k = 0; k < run.histograms.size(); ++k)
    {
        s.push_back(run.series[k].t);
        l1.push_back(l1_distance(run.histograms[k], run.profile));
    }
    double const floor = bootstrap_noise_floor(run.profile, n_particles);
    auto f = fit_convergence(s, l1, floor, cfg.tau);
    bool const ok = f.reliable && f.rate_hat > 0 && f.r2 >= 0.9;
    return {ok, fmt("L1 decay rate %.4f over %zu points above 3 x floor %.4f, r2 %.4f (>= 0.9)", f.rate_hat, f.n_used,
                    floor, f.r2)};
}

Outcome oracle_cross_checks()
{
    // Moment inequalities on every ensemble recorded by the runs above.
    std::size_t n_checked = 0;
    double worst = -INFINITY;
    for (auto const& series : recorded)
        for (auto const& r : series.records())
        {
            double const rel1 = r.m_half * r.m_half / r.E - 1;
            double const rel2 = std::pow(r.E, 1.5) / r.m_three_half - 1;
            double const rel3 = r.E * r.E / (r.m_half * r.m_three_half) - 1;
            worst = std::max({worst, rel1, rel2, rel3});
            ++n_checked;
        }
    bool const holder = worst <= 1e-12;

    // Elastic diagnostic: energy over 10^4 steps.
    auto cfg = make_kernel_config(1.0, 0);
    cfg.elastic_diagnostic = true;
    auto state = DsmcState::create(
        cfg, init_ensemble(n_particles, 3, InitialDistribution::uniform_ball, seed), seed);
    double const e0 = state.energy;
    double drift = 0;
    for (int k = 0; k < 10000; ++k)
    {
        dsmc_step(state, choose_dt(state, 0.05));
        drift = std::max(drift, std::fabs(state.energy - e0) / e0);
    }
    bool const conserved = drift <= 1e-10;

    // Elastic relaxation from a uniform ball to the Maxwellian speed law.
    cfg.tau = 0;
    RescaledOptions opt;
    opt.init = InitialDistribution::uniform_ball;
    auto relax = run_rescaled(cfg, n_particles, seed, 60, 30, opt);
    auto ref = oracle::maxwell3_bins(1.0, relax.profile.bins(), relax.v_max);
    double const l1 = oracle::l1_to_bins(relax.profile, ref, 1 - oracle::maxwell3_speed_cdf(relax.v_max, 1.0));
    bool const maxwell = l1 <= 0.05;

    return {holder && conserved && maxwell,
            fmt("moment inequalities on %zu records (worst relative excess %.2g), elastic energy drift %.2g over 1e4 "
                "steps and %llu collisions (<= 1e-10), elastic profile L1 %.4f (<= 0.05)",
                n_checked, worst, drift, static_cast<unsigned long long>(state.n_collisions), l1)};
}

}  // namespace

int main()
{
    struct Criterion
    {
        char const* name;
        double budget_s;
        std::function<Outcome()> fn;
    };
    std::vector<Criterion> const criteria{
        {"per-collision identities", 10, collision_identities},
        {"Haff law (a = 0)", 300, haff_law},
        {"critical regime (a = 1/2)", 300, critical_regime},
        {"super-critical blow-up (a = 1, e = 0.5)", 600, super_critical},
        {"rescaled energy bounds", 600, rescaled_bounds},
        {"frame coupling", 600, frame_coupling},
        {"moment bound", 300, moment_bound},
        {"attraction", 600, attraction},
        {"oracle cross-checks", 600, oracle_cross_checks},
    };

    int failures = 0;
    for (auto const& c : criteria)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.fn();
        }
        catch (std::exception const& ex)
        {
            out = {false, std::string("exception: ") + ex.what()};
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool const in_time = secs <= c.budget_s;
        bool const pass = out.pass && in_time;
        failures += !pass;
        std::printf("%s  %s: %s [%.1f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs,
                    c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures ? 1 : 0;
}
