#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "granular/ensemble.hpp"

namespace granular
{

struct LinearFit
{
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t n = 0;
};

//! Ordinary least squares y = intercept + slope x. Needs at least two points.
LinearFit least_squares(std::span<double const> x, std::span<double const> y);

enum class Regime
{
    sub_critical,
    critical,
    super_critical
};
std::string to_string(Regime r);

//! a < 1/2 sub-critical, a = 1/2 critical, a > 1/2 super-critical.
Regime classify_regime(double a);

/*!
 * Transform that turns every cooling law into a straight line:
 * y = E^{a-1/2} for a != 1/2 and y = log E for a = 1/2.
 */
std::vector<double> linearize_energy(std::span<double const> energies, double a);
std::vector<double> linearize_energy(MomentSeries const& series, double a);

struct CoolingFit
{
    double a = 0;
    //! 1/(2a-1); empty at a = 1/2.
    std::optional<double> alpha;
    Regime regime = Regime::sub_critical;
    double slope = 0;
    double intercept = 0;
    double slope_lo = 0;
    double slope_hi = 0;
    double r2 = 0;
    double t_lo = 0;
    double t_hi = 0;
    //! Power of E in t - t_root over the window (NaN at a = 1/2).
    double exponent_hat = 0;
    //! Root of the fitted line (super-critical only).
    std::optional<double> Tc_hat;
    std::optional<double> Tc_lo;
    std::optional<double> Tc_hi;
    bool reliable = false;
};

/*!
 * Least-squares line through the linearized energy over the post-transient
 * window.
 *
 * The transient ends at the later of transient_fraction of the elapsed time
 * and the first sliding window whose slope stays within 10% of the tail
 * slope. slope_lo/slope_hi are the extreme slopes over seven half-overlapping
 * sub-windows of a quarter of the fit window. Fits with r2 < 0.9 are flagged
 * unreliable.
 */
CoolingFit fit_cooling(MomentSeries const& series, double a, double transient_fraction = 0.2);

struct MomentBoundCheck
{
    double kappa_hat = 0;
    double mu0_hat = 0;
    double max_violation = 0;
};

/*!
 * kappa_hat = max_t m_{3/2}(t)(1 + mu0_hat t)^3 with mu0_hat from the Haff
 * fit E ~ (1 + mu0 t)^{-2} of the same series.
 */
MomentBoundCheck check_moment_bound(MomentSeries const& series);

struct DecayCheck
{
    std::vector<double> points;
    std::vector<double> values;
    bool decreasing = false;
};

//! Smoothed |dE/ds| near each evaluation point (slope over 10 records).
DecayCheck derivative_decay(MomentSeries const& series,
                            std::span<double const> points,
                            double noise_floor = 0);

std::vector<double> geometric_points(double lo, double hi, std::size_t count);

struct ConvergenceFit
{
    double rate_hat = 0;
    double intercept = 0;
    double r2 = 0;
    double noise_floor = 0;
    double mu_e_check = 0;
    std::size_t n_used = 0;
    bool reliable = false;
};

//! Exponential fit of the L1 distances lying above 3x the noise floor.
ConvergenceFit fit_convergence(std::span<double const> s,
                               std::span<double const> l1,
                               double noise_floor,
                               double tau_e);

//! Mean L1 distance between a histogram of n_samples draws from profile and
//! the profile itself.
double bootstrap_noise_floor(ProfileHistogram const& profile,
                             std::size_t n_samples,
                             std::size_t resamples = 200,
                             std::uint64_t seed = 1);

//! Mean stationarity residual of the window after resampling its energies
//! with replacement (destroys any trend, keeps the spread).
double stationarity_noise_floor(MomentSeries const& series,
                                double window,
                                std::size_t resamples = 200,
                                std::uint64_t seed = 1);

}  // namespace granular
