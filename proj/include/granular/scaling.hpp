#pragma once

#include <vector>

#include "granular/ensemble.hpp"

namespace granular
{

//---------------------------------------------------------------------------//
/*!
 * Energy-driven self-similar change of variables.
 *
 * V solves V' = τ E(t)^{-a} with V(0) = 1 and T(t) = log(V(t))/τ, so that a
 * cooling solution f maps to the drift-collision solution g through
 * w = V(t) v, s = T(t).
 */
struct ScalingMap
{
    std::vector<double> t;
    std::vector<double> V;
    std::vector<double> T;
    double tau = 0;
    double a = 0;
};

//! Trapezoidal quadrature of τE^{-a} over the recorded times.
ScalingMap build_scaling_map(MomentSeries const& energy_history, double tau, double a);

/*!
 * Max over the physical record times of
 * |E(g)(T(t)) - V(t)^2 E(f)(t)| / E(g)(T(t)).
 *
 * E(g) is interpolated linearly in log E between rescaled records.
 */
double verify_energy_coupling(MomentSeries const& physical,
                              MomentSeries const& rescaled,
                              ScalingMap const& map);

//! w_i = V_t v_i.
VelocityEnsemble map_ensemble_to_rescaled(VelocityEnsemble const& ens, double V_t);

//! Log-linear interpolation of E at time s; s must lie within the series.
double interpolate_energy(MomentSeries const& series, double s);

}  // namespace granular
