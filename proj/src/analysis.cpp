#include "granular/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "granular/errors.hpp"
#include "granular/kernel.hpp"
#include "granular/rescaled.hpp"

namespace granular
{

LinearFit least_squares(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InputError("least_squares: need two or more paired points");
    double const n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const dx = x[i] - mx;
        double const dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0))
        throw InputError("least_squares: abscissae are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.n = x.size();
    return fit;
}

std::string to_string(Regime r)
{
    switch (r)
    {
        case Regime::sub_critical:
            return "sub-critical";
        case Regime::critical:
            return "critical";
        case Regime::super_critical:
            return "super-critical";
    }
    return "unknown";
}

Regime classify_regime(double a)
{
    if (a < 0.5)
        return Regime::sub_critical;
    if (a == 0.5)
        return Regime::critical;
    return Regime::super_critical;
}

std::vector<double> linearize_energy(std::span<double const> energies, double a)
{
    std::vector<double> y;
    y.reserve(energies.size());
    for (double e : energies)
    {
        if (!(e > 0))
            throw InputError("linearize_energy: energy must be positive");
        y.push_back(a == 0.5 ? std::log(e) : std::pow(e, a - 0.5));
    }
    return y;
}

std::vector<double> linearize_energy(MomentSeries const& series, double a)
{
    auto const e = series.energies();
    return linearize_energy(e, a);
}

namespace
{
struct Window
{
    std::size_t begin;
    std::size_t end;
};

Window select(std::vector<double> const& t, double lo, double hi)
{
    auto b = std::lower_bound(t.begin(), t.end(), lo);
    auto e = std::upper_bound(t.begin(), t.end(), hi);
    return {static_cast<std::size_t>(b - t.begin()), static_cast<std::size_t>(e - t.begin())};
}

std::optional<LinearFit>
fit_range(std::vector<double> const& t, std::vector<double> const& y, double lo, double hi)
{
    Window w = select(t, lo, hi);
    if (w.end < w.begin + 3)
        return std::nullopt;
    return least_squares(std::span(t).subspan(w.begin, w.end - w.begin),
                         std::span(y).subspan(w.begin, w.end - w.begin));
}
}  // namespace

CoolingFit fit_cooling(MomentSeries const& series, double a, double transient_fraction)
{
    if (series.size() < 16)
        throw InputError("fit_cooling: series too short");
    if (!(transient_fraction >= 0 && transient_fraction < 1))
        throw InputError("fit_cooling: transient_fraction must lie in [0,1)");

    auto const t = series.times();
    auto const e = series.energies();
    auto const y = linearize_energy(e, a);

    CoolingFit fit;
    fit.a = a;
    fit.regime = classify_regime(a);
    if (a != 0.5)
        fit.alpha = 1 / (2 * a - 1);

    double const t0 = t.front();
    double const span = t.back() - t0;

    // Transient: sliding windows of span/10 stepped by span/20, compared with
    // the slope of the second half.
    double t_stab = t0 + 0.5 * span;
    if (auto ref = fit_range(t, y, t0 + 0.5 * span, t.back()))
    {
        constexpr int n_windows = 19;
        std::vector<std::optional<double>> slopes(n_windows);
        for (int j = 0; j < n_windows; ++j)
        {
            double const lo = t0 + j * span / 20;
            if (auto f = fit_range(t, y, lo, lo + span / 10))
                slopes[j] = f->slope;
        }
        for (int j = n_windows - 1; j >= 0; --j)
        {
            if (slopes[j] && std::fabs(*slopes[j] - ref->slope) > 0.1 * std::fabs(ref->slope))
                break;
            t_stab = std::min(t_stab, t0 + j * span / 20);
        }
    }
    fit.t_lo = std::max(t0 + transient_fraction * span, t_stab);
    fit.t_hi = t.back();

    auto main = fit_range(t, y, fit.t_lo, fit.t_hi);
    if (!main)
        throw InputError("fit_cooling: fit window holds fewer than 3 records");
    fit.slope = main->slope;
    fit.intercept = main->intercept;
    fit.r2 = main->r2;
    fit.reliable = fit.r2 >= 0.9;

    double const width = fit.t_hi - fit.t_lo;
    fit.slope_lo = std::numeric_limits<double>::infinity();
    fit.slope_hi = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 6; ++k)
    {
        double const lo = fit.t_lo + k * width / 8;
        if (auto f = fit_range(t, y, lo, lo + width / 4))
        {
            fit.slope_lo = std::min(fit.slope_lo, f->slope);
            fit.slope_hi = std::max(fit.slope_hi, f->slope);
        }
    }
    if (!std::isfinite(fit.slope_lo))
        fit.slope_lo = fit.slope_hi = fit.slope;

    Window w = select(t, fit.t_lo, fit.t_hi);
    if (a > 0.5 && fit.slope < 0)
    {
        fit.Tc_hat = -fit.intercept / fit.slope;
        double mt = 0, my = 0;
        for (std::size_t i = w.begin; i < w.end; ++i)
        {
            mt += t[i];
            my += y[i];
        }
        mt /= static_cast<double>(w.end - w.begin);
        my /= static_cast<double>(w.end - w.begin);
        if (fit.slope_hi < 0)
        {
            double const r1 = mt - my / fit.slope_lo;
            double const r2 = mt - my / fit.slope_hi;
            fit.Tc_lo = std::min(r1, r2);
            fit.Tc_hi = std::max(r1, r2);
        }
    }

    if (a == 0.5 || fit.slope == 0)
    {
        fit.exponent_hat = std::numeric_limits<double>::quiet_NaN();
    }
    else
    {
        double const t_root = -fit.intercept / fit.slope;
        std::vector<double> lx, ly;
        for (std::size_t i = w.begin; i < w.end; ++i)
        {
            double const dist = std::fabs(t[i] - t_root);
            if (dist > 0)
            {
                lx.push_back(std::log(dist));
                ly.push_back(std::log(e[i]));
            }
        }
        fit.exponent_hat = lx.size() >= 2 ? least_squares(lx, ly).slope
                                          : std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

MomentBoundCheck check_moment_bound(MomentSeries const& series)
{
    for (auto const& r : series.records())
        if (!std::isfinite(r.m_three_half))
            throw InputError("check_moment_bound: series lacks m_three_half");
    CoolingFit const haff = fit_cooling(series, 0.0);
    MomentBoundCheck out;
    out.mu0_hat = haff.slope / (haff.intercept + haff.slope * series[0].t);
    for (auto const& r : series.records())
    {
        double const g = 1 + out.mu0_hat * (r.t - series[0].t);
        out.kappa_hat = std::max(out.kappa_hat, r.m_three_half * g * g * g);
    }
    for (auto const& r : series.records())
    {
        double const g = 1 + out.mu0_hat * (r.t - series[0].t);
        out.max_violation = std::max(out.max_violation, r.m_three_half - out.kappa_hat / (g * g * g));
    }
    return out;
}

DecayCheck derivative_decay(MomentSeries const& series,
                            std::span<double const> points,
                            double noise_floor)
{
    if (points.size() < 3)
        throw InputError("derivative_decay: need at least 3 evaluation points");
    constexpr std::size_t span = 10;
    if (series.size() < span)
        throw InputError("derivative_decay: series too short");
    auto const t = series.times();
    auto const e = series.energies();

    DecayCheck out;
    out.points.assign(points.begin(), points.end());
    for (double p : points)
    {
        if (p < t.front() || p > t.back())
            throw InputError("derivative_decay: evaluation point outside series");
        auto idx = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), p) - t.begin());
        std::size_t begin = idx >= span / 2 ? idx - span / 2 : 0;
        begin = std::min(begin, t.size() - span);
        LinearFit const f = least_squares(std::span(t).subspan(begin, span),
                                          std::span(e).subspan(begin, span));
        out.values.push_back(std::fabs(f.slope));
    }
    out.decreasing = true;
    for (std::size_t k = 1; k < out.values.size(); ++k)
        if (out.values[k] > out.values[k - 1] + noise_floor)
            out.decreasing = false;
    return out;
}

std::vector<double> geometric_points(double lo, double hi, std::size_t count)
{
    if (!(lo > 0 && hi > lo) || count < 2)
        throw InputError("geometric_points: need 0 < lo < hi and count >= 2");
    std::vector<double> out(count);
    double const ratio = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = lo * std::exp(ratio * static_cast<double>(k));
    out.back() = hi;
    return out;
}

ConvergenceFit fit_convergence(std::span<double const> s,
                               std::span<double const> l1,
                               double noise_floor,
                               double tau_e)
{
    if (s.size() != l1.size())
        throw InputError("fit_convergence: s and l1 lengths differ");
    ConvergenceFit out;
    out.noise_floor = noise_floor;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        if (l1[i] > 3 * noise_floor && l1[i] > 0)
        {
            xs.push_back(s[i]);
            ys.push_back(std::log(l1[i]));
        }
    }
    out.n_used = xs.size();
    if (xs.size() < 5)
    {
        out.rate_hat = std::numeric_limits<double>::quiet_NaN();
        out.mu_e_check = out.rate_hat;
        out.reliable = false;
        return out;
    }
    LinearFit const f = least_squares(xs, ys);
    out.rate_hat = -f.slope;
    out.intercept = f.intercept;
    out.r2 = f.r2;
    out.mu_e_check = tau_e > 0 ? out.rate_hat / tau_e : std::numeric_limits<double>::quiet_NaN();
    out.reliable = true;
    return out;
}

double bootstrap_noise_floor(ProfileHistogram const& profile,
                             std::size_t n_samples,
                             std::size_t resamples,
                             std::uint64_t seed)
{
    if (n_samples == 0 || resamples == 0)
        throw InputError("bootstrap_noise_floor: need samples and resamples");
    std::vector<double> weights(profile.masses);
    weights.push_back(profile.overflow);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    Rng rng(seed);
    std::size_t const bins = profile.bins();
    std::vector<std::size_t> counts(bins + 1);
    double total = 0;
    for (std::size_t r = 0; r < resamples; ++r)
    {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n_samples; ++i)
            ++counts[pick(rng)];
        double d = 0;
        for (std::size_t b = 0; b <= bins; ++b)
        {
            double const ref = b < bins ? profile.masses[b] : profile.overflow;
            d += std::fabs(static_cast<double>(counts[b]) / static_cast<double>(n_samples) - ref);
        }
        total += d;
    }
    return total / static_cast<double>(resamples);
}

double stationarity_noise_floor(MomentSeries const& series,
                                double window,
                                std::size_t resamples,
                                std::uint64_t seed)
{
    if (resamples == 0)
        throw InputError("stationarity_noise_floor: need resamples");
    double const s_start = series.back().t - window;
    std::vector<MomentRecord> win;
    for (auto const& r : series.records())
        if (r.t >= s_start - 1e-12)
            win.push_back(r);
    if (win.size() < 10)
        throw InputError("stationarity_noise_floor: window holds fewer than 10 records");

    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, win.size() - 1);
    double total = 0;
    for (std::size_t r = 0; r < resamples; ++r)
    {
        MomentSeries boot(series.dim());
        for (auto const& rec : win)
        {
            MomentRecord b = rec;
            b.E = win[pick(rng)].E;
            boot.append(std::move(b));
        }
        total += stationarity_residual(boot, boot.back().t - boot[0].t);
    }
    return total / static_cast<double>(resamples);
}

}  // namespace granular
