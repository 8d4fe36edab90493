#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace granular
{

using Rng = std::mt19937_64;

//---------------------------------------------------------------------------//
/*!
 * Angular part b1 of the collision cross section.
 *
 * The weight is a function of the cosine x = û·ω between the relative
 * velocity and the impact direction. It must satisfy
 * 0 < beta1 <= b1(x) <= beta2 on [-1, 1] and integrate to one over the unit
 * sphere S^{d-1} (the integral is taken over ω, not over x).
 */
struct AngularWeight
{
    std::function<double(double)> fn;
    double beta1 = 0;
    double beta2 = 0;
    bool isotropic = false;
    std::string name;

    double operator()(double x) const { return fn(x); }

    //! Constant b1 = 1/|S^{d-1}|.
    static AngularWeight make_isotropic(int dim);
    //! b1(x) = (1 + coef x)/|S^{d-1}|, |coef| < 1.
    static AngularWeight make_linear_anisotropy(int dim, double coef);
};

//---------------------------------------------------------------------------//
/*!
 * Collision kernel parameters.
 *
 * Restitution e is restricted to [0, 1); e = 1 is accepted only when
 * elastic_diagnostic is set (conservation checks).
 */
struct KernelConfig
{
    double e = 0.9;
    double a = 0.0;
    double tau = 0.1;
    int dim = 3;
    AngularWeight b1 = AngularWeight::make_isotropic(3);
    bool elastic_diagnostic = false;

    //! Throws InputError on any violated invariant (including H2 bounds and
    //! the unit sphere mass of b1, checked to relative 1e-6).
    void validate() const;
};

//! Convenience builder: isotropic b1 in dimension dim, tau defaults to 1-e.
KernelConfig make_kernel_config(double e, double a, int dim = 3);

struct CollisionOutcome
{
    std::vector<double> v_prime;
    std::vector<double> vstar_prime;
    //! |v'|^2 + |v*'|^2 - |v|^2 - |v*|^2 from the closed form.
    double delta_energy = 0;
};

//! Surface area |S^{k}| of the unit k-sphere embedded in R^{k+1}.
double sphere_area(int k);

//! ∫_{S^{d-1}} h(û·ω) dω by adaptive Gauss-Kronrod over the polar angle.
double sphere_integral(std::function<double(double)> const& h, int dim);

//! Post-collisional velocities for an inelastic hard-sphere impact.
CollisionOutcome collide(std::span<double const> v,
                         std::span<double const> v_star,
                         std::span<double const> omega,
                         double e);

/*!
 * In-place collision update without argument checking.
 *
 * The impulse ((1+e)/2)(u·ω)ω/|ω|^2 is formed once per component in extended
 * precision, subtracted from v and added to v_star, so each output carries a
 * single rounding. Returns the energy change.
 */
inline double collide_in_place(std::span<double> v,
                               std::span<double> v_star,
                               std::span<double const> omega,
                               double e)
{
    std::size_t const dim = v.size();
    long double u_dot_omega = 0;
    long double omega_sq = 0;
    for (std::size_t k = 0; k < dim; ++k)
    {
        u_dot_omega += (static_cast<long double>(v[k]) - v_star[k]) * omega[k];
        omega_sq += static_cast<long double>(omega[k]) * omega[k];
    }
    long double const half_impulse = 0.5L * (1 + static_cast<long double>(e)) * u_dot_omega / omega_sq;
    for (std::size_t k = 0; k < dim; ++k)
    {
        long double const j = half_impulse * omega[k];
        v[k] = static_cast<double>(v[k] - j);
        v_star[k] = static_cast<double>(v_star[k] + j);
    }
    long double const ee = e;
    return static_cast<double>(-0.5L * ((1 - ee) * (1 + ee)) * u_dot_omega * u_dot_omega / omega_sq);
}

//! Uniformly distributed unit vector on S^{dim-1}.
void sample_uniform_sphere(std::span<double> out, Rng& rng);

/*!
 * Draw an impact direction with density proportional to b1(û·ω).
 *
 * Uniform-sphere proposal accepted with probability b1(û·ω)/beta2. Throws
 * InternalError after 10^6 rejected proposals.
 */
void sample_omega(std::span<double const> u_hat,
                  AngularWeight const& b1,
                  Rng& rng,
                  std::span<double> omega);

std::vector<double>
sample_omega(std::span<double const> u_hat, AngularWeight const& b1, Rng& rng);

//! D(|u|) = (1-e^2)/4 ∫ |u·ω|^2 b1(û·ω) dω.
double dissipation_rate(double u_mag, KernelConfig const& config);

/*!
 * Lower bound on D(|u|) implied by b1 >= beta1:
 * beta1 (1-e^2)/4 |S^{d-1}|/d |u|^2.
 */
double dissipation_lower_bound(double u_mag, KernelConfig const& config);

}  // namespace granular
