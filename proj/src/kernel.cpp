#include "granular/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "granular/errors.hpp"

namespace granular
{

double sphere_area(int k)
{
    double const h = 0.5 * (k + 1);
    return 2 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

double sphere_integral(std::function<double(double)> const& h, int dim)
{
    if (dim < 2)
        throw InputError("sphere_integral: dimension must be >= 2");
    auto integrand = [&](double theta) {
        double w = 1;
        for (int k = 0; k < dim - 2; ++k)
            w *= std::sin(theta);
        return h(std::cos(theta)) * w;
    };
    double const polar = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, 0.0, std::numbers::pi, 15, 1e-13);
    return sphere_area(dim - 2) * polar;
}

AngularWeight AngularWeight::make_isotropic(int dim)
{
    double const c = 1 / sphere_area(dim - 1);
    AngularWeight w;
    w.fn = [c](double) { return c; };
    w.beta1 = c;
    w.beta2 = c;
    w.isotropic = true;
    w.name = "isotropic";
    return w;
}

AngularWeight AngularWeight::make_linear_anisotropy(int dim, double coef)
{
    if (!(std::fabs(coef) < 1))
        throw InputError("linear anisotropy coefficient must satisfy |c| < 1");
    double const z = sphere_area(dim - 1);
    AngularWeight w;
    w.fn = [coef, z](double x) { return (1 + coef * x) / z; };
    w.beta1 = (1 - std::fabs(coef)) / z;
    w.beta2 = (1 + std::fabs(coef)) / z;
    w.isotropic = (coef == 0);
    w.name = "linear-anisotropy(" + std::to_string(coef) + ")";
    return w;
}

void KernelConfig::validate() const
{
    if (dim < 2)
        throw InputError("dimension must be >= 2");
    if (!(e >= 0) || e > 1 || (e == 1 && !elastic_diagnostic))
        throw InputError("restitution e must lie in [0,1) (e = 1 needs the "
                         "elastic diagnostic flag)");
    if (!(a >= 0) || !std::isfinite(a))
        throw InputError("anomaly exponent a must be >= 0");
    if (!(tau >= 0) || !std::isfinite(tau))
        throw InputError("drift strength tau must be >= 0");
    if (!b1.fn)
        throw InputError("angular weight b1 is not set");
    if (!(b1.beta1 > 0) || b1.beta2 < b1.beta1)
        throw InputError("b1 bounds must satisfy 0 < beta1 <= beta2");
    for (int i = 0; i <= 200; ++i)
    {
        double const x = -1 + i / 100.0;
        double const val = b1(x);
        if (val < b1.beta1 * (1 - 1e-12) || val > b1.beta2 * (1 + 1e-12))
            throw InputError("b1 violates its declared bounds at x = "
                             + std::to_string(x));
    }
    double const mass = sphere_integral(b1.fn, dim);
    if (std::fabs(mass - 1) > 1e-6)
        throw InputError("b1 must have unit mass on the sphere, got "
                         + std::to_string(mass));
}

KernelConfig make_kernel_config(double e, double a, int dim)
{
    KernelConfig c;
    c.e = e;
    c.a = a;
    c.tau = 1 - e;
    c.dim = dim;
    c.b1 = AngularWeight::make_isotropic(dim);
    return c;
}

CollisionOutcome collide(std::span<double const> v,
                         std::span<double const> v_star,
                         std::span<double const> omega,
                         double e)
{
    if (v.size() != v_star.size() || v.size() != omega.size())
        throw InputError("collide: dimension mismatch");
    if (!(e >= 0 && e <= 1))
        throw InputError("collide: restitution must lie in [0, 1]");
    double norm2 = 0;
    for (double w : omega)
        norm2 += w * w;
    if (std::fabs(std::sqrt(norm2) - 1) > 1e-12)
        throw PreconditionError("collide: omega is not a unit vector");

    CollisionOutcome out;
    out.v_prime.assign(v.begin(), v.end());
    out.vstar_prime.assign(v_star.begin(), v_star.end());
    out.delta_energy = collide_in_place(out.v_prime, out.vstar_prime, omega, e);
    return out;
}

void sample_uniform_sphere(std::span<double> out, Rng& rng)
{
    std::normal_distribution<double> normal;
    double norm2 = 0;
    do
    {
        norm2 = 0;
        for (double& x : out)
        {
            x = normal(rng);
            norm2 += x * x;
        }
    } while (norm2 < 1e-300);
    double const inv = 1 / std::sqrt(norm2);
    for (double& x : out)
        x *= inv;
}

void sample_omega(std::span<double const> u_hat,
                  AngularWeight const& b1,
                  Rng& rng,
                  std::span<double> omega)
{
    sample_uniform_sphere(omega, rng);
    if (b1.isotropic)
        return;
    std::uniform_real_distribution<double> uniform;
    constexpr long max_tries = 1'000'000;
    for (long attempt = 0; attempt < max_tries; ++attempt)
    {
        if (attempt > 0)
            sample_uniform_sphere(omega, rng);
        double x = 0;
        for (std::size_t k = 0; k < omega.size(); ++k)
            x += u_hat[k] * omega[k];
        if (uniform(rng) * b1.beta2 < b1(x))
            return;
    }
    throw InternalError("sample_omega: rejection loop exhausted; b1 bounds "
                        "are misconfigured");
}

std::vector<double>
sample_omega(std::span<double const> u_hat, AngularWeight const& b1, Rng& rng)
{
    std::vector<double> omega(u_hat.size());
    sample_omega(u_hat, b1, rng, omega);
    return omega;
}

double dissipation_rate(double u_mag, KernelConfig const& config)
{
    if (u_mag < 0)
        throw PreconditionError("dissipation_rate: negative speed");
    double const angular
        = sphere_integral([&](double x) { return x * x * config.b1(x); }, config.dim);
    return 0.25 * (1 - config.e) * (1 + config.e) * u_mag * u_mag * angular;
}

double dissipation_lower_bound(double u_mag, KernelConfig const& config)
{
    double const sphere_x2 = sphere_area(config.dim - 1) / config.dim;
    return config.b1.beta1 * 0.25 * (1 - config.e) * (1 + config.e) * sphere_x2
           * u_mag * u_mag;
}

}  // namespace granular
