#include "granular/ensemble.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "granular/errors.hpp"
#include "granular/kernel.hpp"
#include "granular/summation.hpp"

namespace granular
{

VelocityEnsemble::VelocityEnsemble(int dim, std::vector<double> velocities)
    : dim_(dim), v_(std::move(velocities))
{
    if (dim < 2)
        throw InputError("ensemble dimension must be >= 2");
    if (v_.size() % static_cast<std::size_t>(dim) != 0)
        throw InputError("velocity buffer length is not a multiple of dim");
    if (size() < 2)
        throw InputError("ensemble needs at least two particles");
    for (double x : v_)
        if (!std::isfinite(x))
            throw InputError("ensemble contains non-finite velocity");
}

void VelocityEnsemble::scale(double factor)
{
    for (double& x : v_)
        x *= factor;
}

std::string to_string(InitialDistribution d)
{
    switch (d)
    {
        case InitialDistribution::maxwellian:
            return "maxwellian";
        case InitialDistribution::uniform_ball:
            return "uniform-ball";
        case InitialDistribution::two_temperature:
            return "two-temperature";
    }
    return "unknown";
}

InitialDistribution parse_initial_distribution(std::string const& name)
{
    if (name == "maxwellian")
        return InitialDistribution::maxwellian;
    if (name == "uniform-ball")
        return InitialDistribution::uniform_ball;
    if (name == "two-temperature")
        return InitialDistribution::two_temperature;
    throw InputError("unknown initial distribution '" + name + "'");
}

VelocityEnsemble
init_ensemble(std::size_t n, int dim, InitialDistribution dist, std::uint64_t seed)
{
    if (n < 2)
        throw InputError("init_ensemble: need n >= 2");
    if (dim < 2)
        throw InputError("init_ensemble: need dim >= 2");

    Rng rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::vector<double> v(n * dim);

    for (std::size_t i = 0; i < n; ++i)
    {
        std::span<double> vi(v.data() + i * dim, dim);
        switch (dist)
        {
            case InitialDistribution::maxwellian:
                for (double& x : vi)
                    x = normal(rng);
                break;
            case InitialDistribution::uniform_ball: {
                sample_uniform_sphere(vi, rng);
                double const r = std::pow(uniform(rng), 1.0 / dim);
                for (double& x : vi)
                    x *= r;
                break;
            }
            case InitialDistribution::two_temperature: {
                // Half the particles ten times hotter than the rest.
                double const sigma = (i % 2 == 0) ? 1.0 : std::sqrt(10.0);
                for (double& x : vi)
                    x = sigma * normal(rng);
                break;
            }
        }
    }
    VelocityEnsemble ens(dim, std::move(v));
    normalize_to_G(ens);
    return ens;
}

std::vector<double> mean_velocity(VelocityEnsemble const& ens)
{
    int const dim = ens.dim();
    std::vector<CompensatedSum> sums(dim);
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        auto vi = ens.velocity(i);
        for (int k = 0; k < dim; ++k)
            sums[k] += vi[k];
    }
    std::vector<double> mean(dim);
    for (int k = 0; k < dim; ++k)
        mean[k] = sums[k].value() / static_cast<double>(ens.size());
    return mean;
}

void normalize_to_G(VelocityEnsemble& ens)
{
    auto const mean = mean_velocity(ens);
    int const dim = ens.dim();
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        auto vi = ens.velocity(i);
        for (int k = 0; k < dim; ++k)
            vi[k] -= mean[k];
    }
    double const e = energy(ens);
    if (!(e > 0))
        throw InputError("normalize_to_G: ensemble has zero energy");
    ens.scale(1 / std::sqrt(e));
}

namespace
{
double squared_norm(std::span<double const> v)
{
    double s = 0;
    for (double x : v)
        s += x * x;
    return s;
}
}  // namespace

double moment(VelocityEnsemble const& ens, double l)
{
    if (!(l >= 0))
        throw PreconditionError("moment: order must be >= 0");
    if (l == 0)
        return 1.0;
    CompensatedSum sum;
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        double const r2 = squared_norm(ens.velocity(i));
        double term;
        if (l == 1)
            term = r2;
        else if (l == 0.5)
            term = std::sqrt(r2);
        else if (l == 1.5)
            term = r2 * std::sqrt(r2);
        else if (l == 2)
            term = r2 * r2;
        else
            term = std::pow(r2, l);
        sum += term;
    }
    return sum.value() / static_cast<double>(ens.size());
}

double max_speed(VelocityEnsemble const& ens)
{
    double m = 0;
    for (std::size_t i = 0; i < ens.size(); ++i)
        m = std::max(m, squared_norm(ens.velocity(i)));
    return std::sqrt(m);
}

void MomentSeries::append(MomentRecord rec)
{
    if (!records_.empty() && !(rec.t > records_.back().t))
        throw InputError("MomentSeries: times must be strictly increasing");
    if (dim_ == 0)
        dim_ = static_cast<int>(rec.p.size());
    records_.push_back(std::move(rec));
}

std::vector<double> MomentSeries::times() const
{
    std::vector<double> out;
    out.reserve(records_.size());
    for (auto const& r : records_)
        out.push_back(r.t);
    return out;
}

std::vector<double> MomentSeries::energies() const
{
    std::vector<double> out;
    out.reserve(records_.size());
    for (auto const& r : records_)
        out.push_back(r.E);
    return out;
}

void MomentSeries::truncate(std::size_t count)
{
    if (count < records_.size())
        records_.resize(count);
}

MomentRecord
measure(VelocityEnsemble const& ens, double t, std::uint64_t n_collisions, double dt)
{
    int const dim = ens.dim();
    CompensatedSum e, half, three_half;
    std::vector<CompensatedSum> p(dim);
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        auto vi = ens.velocity(i);
        double const r2 = squared_norm(vi);
        double const r = std::sqrt(r2);
        e += r2;
        half += r;
        three_half += r2 * r;
        for (int k = 0; k < dim; ++k)
            p[k] += vi[k];
    }
    double const inv_n = 1.0 / static_cast<double>(ens.size());
    MomentRecord rec;
    rec.t = t;
    rec.E = e.value() * inv_n;
    rec.m_half = half.value() * inv_n;
    rec.m_three_half = three_half.value() * inv_n;
    rec.p.resize(dim);
    for (int k = 0; k < dim; ++k)
        rec.p[k] = p[k].value() * inv_n;
    rec.n_collisions = n_collisions;
    rec.dt = dt;
    return rec;
}

ProfileHistogram make_histogram(std::size_t bins, double v_max)
{
    if (bins < 8)
        throw PreconditionError("histogram needs at least 8 bins");
    if (!(v_max > 0))
        throw PreconditionError("histogram v_max must be positive");
    ProfileHistogram h;
    h.bin_edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b)
        h.bin_edges[b] = v_max * static_cast<double>(b) / static_cast<double>(bins);
    h.masses.assign(bins, 0.0);
    return h;
}

ProfileHistogram
radial_histogram(VelocityEnsemble const& ens, std::size_t bins, double v_max)
{
    ProfileHistogram h = make_histogram(bins, v_max);
    std::vector<std::size_t> counts(bins, 0);
    std::size_t over = 0;
    double const scale = static_cast<double>(bins) / v_max;
    for (std::size_t i = 0; i < ens.size(); ++i)
    {
        double const s = std::sqrt(squared_norm(ens.velocity(i)));
        if (s >= v_max)
        {
            ++over;
            continue;
        }
        auto b = static_cast<std::size_t>(s * scale);
        counts[std::min(b, bins - 1)]++;
    }
    double const inv_n = 1.0 / static_cast<double>(ens.size());
    for (std::size_t b = 0; b < bins; ++b)
        h.masses[b] = static_cast<double>(counts[b]) * inv_n;
    h.overflow = static_cast<double>(over) * inv_n;
    h.n_samples = ens.size();
    return h;
}

ProfileHistogram
maxwellian_speed_histogram(int dim, double energy, std::size_t bins, double v_max)
{
    if (!(energy > 0))
        throw InputError("maxwellian_speed_histogram: energy must be positive");
    ProfileHistogram h = make_histogram(bins, v_max);
    // |v|^2 / (2σ^2) ~ Gamma(d/2) with σ^2 = E/d per component.
    double const two_sigma2 = 2 * energy / dim;
    auto cdf = [&](double s) {
        return boost::math::gamma_p(0.5 * dim, s * s / two_sigma2);
    };
    double prev = 0;
    for (std::size_t b = 0; b < bins; ++b)
    {
        double const next = cdf(h.bin_edges[b + 1]);
        h.masses[b] = next - prev;
        prev = next;
    }
    h.overflow = boost::math::gamma_q(0.5 * dim, v_max * v_max / two_sigma2);
    return h;
}

}  // namespace granular
