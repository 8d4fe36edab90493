#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "granular/analysis.hpp"
#include "granular/errors.hpp"
#include "oracles.hpp"

using namespace granular;

namespace
{
template <class F, class G>
MomentSeries synthetic(double t_end, std::size_t steps, F energy_of, G m32_of)
{
    MomentSeries s(3);
    for (std::size_t k = 0; k <= steps; ++k)
    {
        MomentRecord r;
        r.t = t_end * static_cast<double>(k) / static_cast<double>(steps);
        r.E = energy_of(r.t);
        r.m_three_half = m32_of(r.t);
        s.append(r);
    }
    return s;
}

template <class F>
MomentSeries synthetic(double t_end, std::size_t steps, F energy_of)
{
    return synthetic(t_end, steps, energy_of, [](double) { return NAN; });
}
}  // namespace

TEST_CASE("least squares on an exact line")
{
    std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    auto f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2).epsilon(1e-14));
    CHECK(f.intercept == doctest::Approx(1).epsilon(1e-14));
    CHECK(f.r2 == doctest::Approx(1).epsilon(1e-14));
    CHECK(f.n == 4);
    CHECK_THROWS_AS(least_squares(std::vector<double>{1}, std::vector<double>{1}), InputError);
    CHECK_THROWS_AS(least_squares(std::vector<double>{1, 1}, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("regime classification")
{
    CHECK(classify_regime(0.0) == Regime::sub_critical);
    CHECK(classify_regime(0.49) == Regime::sub_critical);
    CHECK(classify_regime(0.5) == Regime::critical);
    CHECK(classify_regime(0.51) == Regime::super_critical);
    CHECK(to_string(Regime::super_critical) == "super-critical");
}

TEST_CASE("linearized transforms")
{
    std::vector<double> t{0, 0.5, 1, 1.5};
    std::vector<double> haff, crit, sup;
    for (double s : t)
    {
        haff.push_back(1 / ((1 + s) * (1 + s)));
        crit.push_back(std::exp(-3 * s));
        sup.push_back((1 - s / 2) * (1 - s / 2));
    }
    auto y0 = linearize_energy(haff, 0.0);
    auto yc = linearize_energy(crit, 0.5);
    auto y1 = linearize_energy(sup, 1.0);
    for (std::size_t k = 0; k < t.size(); ++k)
    {
        CHECK(y0[k] == doctest::Approx(1 + t[k]).epsilon(1e-14));
        CHECK(yc[k] == doctest::Approx(-3 * t[k]).epsilon(1e-14).scale(1));
        CHECK(y1[k] == doctest::Approx(1 - t[k] / 2).epsilon(1e-14));
    }
    CHECK_THROWS_AS(linearize_energy(std::vector<double>{1, 0}, 0.0), InputError);
}

TEST_CASE("synthetic Haff series: exponent -2")
{
    auto s = synthetic(100, 400, [](double t) { return 1 / ((1 + t) * (1 + t)); });
    auto f = fit_cooling(s, 0.0);
    CHECK(f.regime == Regime::sub_critical);
    REQUIRE(f.alpha);
    CHECK(*f.alpha == -1.0);
    CHECK(f.slope == doctest::Approx(1).epsilon(1e-10));
    CHECK(f.intercept == doctest::Approx(1).epsilon(1e-10));
    CHECK(std::fabs(f.exponent_hat + 2) < 1e-3);
    CHECK(f.r2 > 0.999999);
    CHECK(f.reliable);
    CHECK(f.t_lo == doctest::Approx(20));
    CHECK(f.t_hi == 100);
    CHECK(f.slope_lo <= f.slope);
    CHECK(f.slope_hi >= f.slope);
    CHECK_FALSE(f.Tc_hat);
}

TEST_CASE("synthetic critical series: slope -c")
{
    double const c = 0.37;
    auto s = synthetic(20, 200, [c](double t) { return std::exp(-c * t); });
    auto f = fit_cooling(s, 0.5);
    CHECK(f.regime == Regime::critical);
    CHECK_FALSE(f.alpha);
    CHECK(std::fabs(f.slope + c) < 1e-3);
    CHECK(std::isnan(f.exponent_hat));
}

TEST_CASE("synthetic super-critical series: root at t = 2")
{
    auto s = synthetic(1.9, 190, [](double t) { return (1 - t / 2) * (1 - t / 2); });
    auto f = fit_cooling(s, 1.0);
    CHECK(f.regime == Regime::super_critical);
    REQUIRE(f.Tc_hat);
    CHECK(*f.Tc_hat == doctest::Approx(2.0).epsilon(1e-10));
    REQUIRE(f.Tc_lo);
    CHECK(*f.Tc_lo <= *f.Tc_hat + 1e-9);
    CHECK(*f.Tc_hi >= *f.Tc_hat - 1e-9);
    CHECK(f.exponent_hat == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("transient detection skips an initial non-linear stretch")
{
    // Linear y after t = 40, curved before.
    auto s = synthetic(100, 500, [](double t) {
        double const y = t < 40 ? 1 + t + (40 - t) * (40 - t) / 80.0 : 1 + t;
        return 1 / (y * y);
    });
    auto f = fit_cooling(s, 0.0, 0.0);
    CHECK(f.t_lo >= 35);
    CHECK(f.slope == doctest::Approx(1).epsilon(1e-3));
}

TEST_CASE("noisy series is flagged unreliable")
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    auto s = synthetic(100, 200, [&](double) { return u(rng); });
    auto f = fit_cooling(s, 0.0);
    CHECK(f.r2 < 0.9);
    CHECK_FALSE(f.reliable);
}

TEST_CASE("fit_cooling input checks")
{
    auto s = synthetic(1, 10, [](double) { return 1.0; });
    CHECK_THROWS_AS(fit_cooling(s, 0.0), InputError);
    auto l = synthetic(10, 100, [](double t) { return std::exp(-t); });
    CHECK_THROWS_AS(fit_cooling(l, 0.5, 1.0), InputError);
}

TEST_CASE("moment bound on the exact decay is one")
{
    auto s = synthetic(
        50, 500, [](double t) { return std::pow(1 + t, -2); }, [](double t) { return std::pow(1 + t, -3); });
    auto m = check_moment_bound(s);
    CHECK(m.mu0_hat == doctest::Approx(1).epsilon(1e-9));
    CHECK(m.kappa_hat == doctest::Approx(1).epsilon(1e-6));
    CHECK(m.max_violation <= 1e-9);
}

TEST_CASE("moment bound with too slow decay grows with the horizon")
{
    auto run = [](double horizon) {
        auto s = synthetic(
            horizon, 400, [](double t) { return std::pow(1 + t, -2); },
            [](double t) { return std::pow(1 + t, -2); });
        return check_moment_bound(s).kappa_hat;
    };
    double const k1 = run(25), k2 = run(50);
    CHECK(k1 == doctest::Approx(26).epsilon(1e-6));
    CHECK(k2 / k1 > 1.2);
}

TEST_CASE("moment bound needs m_three_half")
{
    auto s = synthetic(10, 100, [](double t) { return std::pow(1 + t, -2); });
    CHECK_THROWS_AS(check_moment_bound(s), InputError);
}

TEST_CASE("derivative decay of a constant series")
{
    auto s = synthetic(100, 100, [](double) { return 2.0; });
    auto pts = geometric_points(5, 90, 5);
    auto d = derivative_decay(s, pts, 0);
    for (double v : d.values)
        CHECK(v == 0.0);
    CHECK(d.decreasing);
}

TEST_CASE("derivative of 1 + exp(-s) halves per log 2 step")
{
    auto s = synthetic(12, 1200, [](double x) { return 1 + std::exp(-x); });
    std::vector<double> pts;
    for (int k = 0; k < 6; ++k)
        pts.push_back(2 + k * std::log(2.0));
    auto d = derivative_decay(s, pts, 0);
    CHECK(d.decreasing);
    for (std::size_t k = 1; k < d.values.size(); ++k)
        CHECK(d.values[k] / d.values[k - 1] == doctest::Approx(0.5).epsilon(0.1));
    CHECK_THROWS_AS(derivative_decay(s, std::vector<double>{1, 2}, 0), InputError);
    CHECK_THROWS_AS(derivative_decay(s, std::vector<double>{1, 2, 30}, 0), InputError);
}

TEST_CASE("derivative decay flags growth")
{
    auto s = synthetic(10, 100, [](double x) { return x * x; });
    auto d = derivative_decay(s, geometric_points(1, 9, 4), 0);
    CHECK_FALSE(d.decreasing);
}

TEST_CASE("geometric points")
{
    auto p = geometric_points(1, 16, 5);
    CHECK(p.front() == 1.0);
    CHECK(p.back() == 16.0);
    CHECK(p[2] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS_AS(geometric_points(0, 1, 3), InputError);
}

TEST_CASE("convergence fit recovers an exponential rate")
{
    std::vector<double> s, l1;
    for (int k = 0; k <= 40; ++k)
    {
        s.push_back(0.5 * k);
        l1.push_back(2 * std::exp(-0.3 * 0.5 * k));
    }
    auto f = fit_convergence(s, l1, 0.0, 0.05);
    CHECK(std::fabs(f.rate_hat - 0.3) < 1e-3);
    CHECK(f.reliable);
    CHECK(f.n_used == 41);
    CHECK(f.mu_e_check == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("convergence fit at the noise floor is unreliable")
{
    std::vector<double> s(30), l1(30, 0.0);
    for (int k = 0; k < 30; ++k)
        s[k] = k;
    auto f = fit_convergence(s, l1, 0.01, 0.05);
    CHECK_FALSE(f.reliable);
    CHECK(f.n_used == 0);
    CHECK_THROWS_AS(fit_convergence(s, std::vector<double>(3), 0.01, 0.05), InputError);
}

TEST_CASE("bootstrap noise floor agrees with the multinomial expectation")
{
    auto h = make_histogram(16, 1.0);
    std::vector<double> p(16);
    double total = 0;
    for (int b = 0; b < 16; ++b)
        total += (p[b] = 1 + b % 5);
    for (int b = 0; b < 16; ++b)
        h.masses[b] = p[b] / total;
    std::vector<double> probs(h.masses);
    probs.push_back(0);
    double const n = 10000;
    double const floor = bootstrap_noise_floor(h, 10000, 200, 3);
    CHECK(floor == doctest::Approx(oracle::multinomial_l1(probs, n)).epsilon(0.05));
}

TEST_CASE("stationarity noise floor of white noise")
{
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g(10, 0.1);
    auto s = synthetic(100, 100, [&](double) { return g(rng); });
    double const floor = stationarity_noise_floor(s, 50);
    CHECK(floor > 0);
    // Slope noise over ten unit-spaced points: σ/sqrt(Σ(x-x̄)^2) = 0.1/sqrt(82.5).
    CHECK(floor > 0.1 / std::sqrt(82.5));
    CHECK(floor < 6 * 0.1 / std::sqrt(82.5));
}
