#include "granular/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "granular/errors.hpp"

namespace granular
{

ScalingMap build_scaling_map(MomentSeries const& energy_history, double tau, double a)
{
    if (!(tau > 0))
        throw InputError("build_scaling_map: tau must be positive");
    if (!(a >= 0))
        throw InputError("build_scaling_map: a must be >= 0");
    if (energy_history.empty())
        throw InputError("build_scaling_map: empty energy history");

    ScalingMap map;
    map.tau = tau;
    map.a = a;
    auto const& recs = energy_history.records();
    map.t.reserve(recs.size());
    map.V.reserve(recs.size());
    map.T.reserve(recs.size());

    double prev_rate = 0;
    for (std::size_t k = 0; k < recs.size(); ++k)
    {
        double const e = recs[k].E;
        if (!(e > 0) || !std::isfinite(e))
            throw InputError("build_scaling_map: non-positive energy in history");
        double const rate = tau * std::pow(e, -a);
        double v;
        if (k == 0)
        {
            v = 1.0;
        }
        else
        {
            double const h = recs[k].t - recs[k - 1].t;
            if (!(h > 0))
                throw InputError("build_scaling_map: times must increase");
            v = map.V.back() + 0.5 * h * (prev_rate + rate);
        }
        map.t.push_back(recs[k].t - recs[0].t);
        map.V.push_back(v);
        map.T.push_back(std::log(v) / tau);
        prev_rate = rate;
    }
    return map;
}

double interpolate_energy(MomentSeries const& series, double s)
{
    auto const& recs = series.records();
    if (recs.empty())
        throw InputError("interpolate_energy: empty series");
    double const tol = 1e-9 * std::max(1.0, std::fabs(recs.back().t));
    if (s < recs.front().t - tol || s > recs.back().t + tol)
        throw InputError("interpolate_energy: time outside series range");
    auto it = std::lower_bound(recs.begin(), recs.end(), s,
                               [](MomentRecord const& r, double x) { return r.t < x; });
    if (it == recs.begin())
        return it->E;
    if (it == recs.end())
        return recs.back().E;
    auto const& hi = *it;
    auto const& lo = *(it - 1);
    double const w = (s - lo.t) / (hi.t - lo.t);
    return std::exp((1 - w) * std::log(lo.E) + w * std::log(hi.E));
}

double verify_energy_coupling(MomentSeries const& physical,
                              MomentSeries const& rescaled,
                              ScalingMap const& map)
{
    if (physical.size() != map.t.size())
        throw InputError("verify_energy_coupling: map was not built from this series");
    if (rescaled.empty())
        throw InputError("verify_energy_coupling: empty rescaled series");
    double const s_end = rescaled.back().t;
    if (map.T.back() > s_end * (1 + 1e-9) + 1e-12)
        throw InputError("verify_energy_coupling: rescaled series ends at s = "
                         + std::to_string(s_end) + " before T(t_end) = "
                         + std::to_string(map.T.back()));

    double worst = 0;
    for (std::size_t k = 0; k < map.t.size(); ++k)
    {
        double const eg = interpolate_energy(rescaled, map.T[k]);
        double const pred = map.V[k] * map.V[k] * physical[k].E;
        worst = std::max(worst, std::fabs(eg - pred) / eg);
    }
    return worst;
}

VelocityEnsemble map_ensemble_to_rescaled(VelocityEnsemble const& ens, double V_t)
{
    if (!(V_t > 0))
        throw PreconditionError("map_ensemble_to_rescaled: V must be positive");
    VelocityEnsemble out = ens;
    out.scale(V_t);
    return out;
}

}  // namespace granular
