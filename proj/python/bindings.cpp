#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "granular/analysis.hpp"
#include "granular/cli.hpp"
#include "granular/dsmc.hpp"
#include "granular/ensemble.hpp"
#include "granular/errors.hpp"
#include "granular/kernel.hpp"
#include "granular/rescaled.hpp"
#include "granular/scaling.hpp"

namespace py = pybind11;
using namespace granular;

namespace
{
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(Array const& a)
{
    return {a.data(), a.data() + a.size()};
}

Array to_array(std::vector<double> const& v)
{
    return Array(static_cast<py::ssize_t>(v.size()), v.data());
}

Array ensemble_array(VelocityEnsemble const& ens)
{
    Array out({static_cast<py::ssize_t>(ens.size()), static_cast<py::ssize_t>(ens.dim())});
    std::copy(ens.data().begin(), ens.data().end(), out.mutable_data());
    return out;
}

VelocityEnsemble array_ensemble(Array const& a)
{
    if (a.ndim() != 2)
        throw InputError("velocities must be a 2-d array of shape (N, d)");
    return VelocityEnsemble(static_cast<int>(a.shape(1)), to_vector(a));
}

KernelConfig kernel(double e, double a, int dim, std::string const& b1, double b1_coef, bool elastic)
{
    auto c = make_kernel_config(e, a, dim);
    if (b1 == "linear-anisotropy")
        c.b1 = AngularWeight::make_linear_anisotropy(dim, b1_coef);
    else if (b1 != "isotropic")
        throw InputError("b1 must be isotropic or linear-anisotropy");
    c.elastic_diagnostic = elastic;
    return c;
}

py::dict series_dict(MomentSeries const& s)
{
    std::vector<double> t, E, mh, m32, dt, ncoll;
    for (auto const& r : s.records())
    {
        t.push_back(r.t);
        E.push_back(r.E);
        mh.push_back(r.m_half);
        m32.push_back(r.m_three_half);
        dt.push_back(r.dt);
        ncoll.push_back(static_cast<double>(r.n_collisions));
    }
    py::dict d;
    d["t"] = to_array(t);
    d["E"] = to_array(E);
    d["m_half"] = to_array(mh);
    d["m_three_half"] = to_array(m32);
    d["n_coll"] = to_array(ncoll);
    d["dt"] = to_array(dt);
    return d;
}

MomentSeries series_from(Array const& t, Array const& E, std::optional<Array> const& m32)
{
    if (t.size() != E.size() || (m32 && m32->size() != t.size()))
        throw InputError("series columns differ in length");
    MomentSeries s(3);
    for (py::ssize_t k = 0; k < t.size(); ++k)
    {
        MomentRecord r;
        r.t = t.data()[k];
        r.E = E.data()[k];
        r.m_three_half = m32 ? m32->data()[k] : std::nan("");
        s.append(r);
    }
    return s;
}

py::dict profile_dict(ProfileHistogram const& h)
{
    py::dict d;
    d["bin_edges"] = to_array(h.bin_edges);
    d["masses"] = to_array(h.masses);
    d["overflow"] = h.overflow;
    return d;
}

ProfileHistogram profile_from(py::dict const& d)
{
    ProfileHistogram h;
    h.bin_edges = to_vector(d["bin_edges"].cast<Array>());
    h.masses = to_vector(d["masses"].cast<Array>());
    h.overflow = d.contains("overflow") ? d["overflow"].cast<double>() : 0.0;
    if (h.bin_edges.size() != h.masses.size() + 1)
        throw InputError("profile needs one more edge than masses");
    return h;
}

py::object opt(std::optional<double> v)
{
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}
}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "DSMC solver for the homogeneous inelastic Boltzmann equation";
    m.attr("__version__") = cli::version;

    static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
    static py::exception<DivergenceError> divergence(m, "DivergenceError", numerical.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (DivergenceError const& e)
        {
            py::set_error(divergence, e.what());
        }
        catch (NumericalError const& e)
        {
            py::set_error(numerical, e.what());
        }
    });

    // Kernel
    m.def(
        "collide",
        [](Array v, Array v_star, Array omega, double e) {
            auto vv = to_vector(v), vs = to_vector(v_star), om = to_vector(omega);
            auto out = collide(vv, vs, om, e);
            return py::make_tuple(to_array(out.v_prime), to_array(out.vstar_prime), out.delta_energy);
        },
        py::arg("v"), py::arg("v_star"), py::arg("omega"), py::arg("e"),
        "Post-collisional velocities and the energy change.");
    m.def(
        "sample_omega",
        [](Array u_hat, std::string const& b1, double b1_coef, std::uint64_t seed, std::size_t count) {
            auto const u = to_vector(u_hat);
            int const dim = static_cast<int>(u.size());
            auto const cfg = kernel(0.5, 0, dim, b1, b1_coef, false);
            Rng rng(seed);
            Array out({static_cast<py::ssize_t>(count), static_cast<py::ssize_t>(dim)});
            for (std::size_t i = 0; i < count; ++i)
                sample_omega(u, cfg.b1, rng, std::span<double>(out.mutable_data() + i * dim, dim));
            return out;
        },
        py::arg("u_hat"), py::arg("b1") = "isotropic", py::arg("b1_coef") = 0.0, py::arg("seed") = 1,
        py::arg("count") = 1);
    m.def(
        "dissipation_rate",
        [](double u, double e, int dim, std::string const& b1, double coef) {
            return dissipation_rate(u, kernel(e, 0, dim, b1, coef, e == 1.0));
        },
        py::arg("u_mag"), py::arg("e"), py::arg("dim") = 3, py::arg("b1") = "isotropic", py::arg("b1_coef") = 0.0);
    m.def("sphere_area", &sphere_area, py::arg("k"));

    // Ensembles
    m.def(
        "init_ensemble",
        [](std::size_t n, int dim, std::string const& init, std::uint64_t seed) {
            return ensemble_array(init_ensemble(n, dim, parse_initial_distribution(init), seed));
        },
        py::arg("n"), py::arg("dim") = 3, py::arg("init") = "maxwellian", py::arg("seed") = 1);
    m.def(
        "moment", [](Array v, double l) { return moment(array_ensemble(v), l); }, py::arg("velocities"),
        py::arg("l"));
    m.def(
        "radial_histogram",
        [](Array v, std::size_t bins, double v_max) {
            return profile_dict(radial_histogram(array_ensemble(v), bins, v_max));
        },
        py::arg("velocities"), py::arg("bins"), py::arg("v_max"));
    m.def(
        "l1_distance", [](py::dict a, py::dict b) { return l1_distance(profile_from(a), profile_from(b)); },
        py::arg("h1"), py::arg("h2"));

    // Solvers
    m.def(
        "run_physical",
        [](double e, double a, std::size_t n, std::uint64_t seed, double epsilon_stop, double t_max, int dim,
           std::string const& b1, double b1_coef, double c_target, std::string const& init, bool elastic) {
            DsmcOptions o;
            o.c_target = c_target;
            o.init = parse_initial_distribution(init);
            PhysicalRun run = [&] {
                py::gil_scoped_release release;
                return run_physical(kernel(e, a, dim, b1, b1_coef, elastic), n, seed, epsilon_stop, t_max, o);
            }();
            py::dict d;
            d["series"] = series_dict(run.series);
            d["halt_reason"] = to_string(run.halt);
            d["t_final"] = run.final_state.t;
            d["n_collisions"] = run.final_state.n_collisions;
            d["velocities"] = ensemble_array(run.final_state.ens);
            return d;
        },
        py::arg("e"), py::arg("a") = 0.0, py::arg("n") = 20000, py::arg("seed") = 1, py::arg("epsilon_stop") = 1e-6,
        py::arg("t_max") = 1000.0, py::arg("dim") = 3, py::arg("b1") = "isotropic", py::arg("b1_coef") = 0.0,
        py::arg("c_target") = 0.05, py::arg("init") = "maxwellian", py::arg("elastic_diagnostic") = false);
    m.def(
        "run_rescaled",
        [](double e, std::optional<double> tau, std::size_t n, std::uint64_t seed, double s_max,
           std::optional<double> avg_window, int dim, std::string const& b1, double b1_coef, double record_interval,
           std::size_t bins, double v_max, std::string const& init, bool keep_histograms, bool elastic) {
            auto cfg = kernel(e, 0, dim, b1, b1_coef, elastic);
            cfg.tau = tau.value_or(1 - e);
            RescaledOptions o;
            o.record_interval = record_interval;
            o.bins = bins;
            o.v_max = v_max;
            o.init = parse_initial_distribution(init);
            o.keep_histograms = keep_histograms;
            RescaledRun run = [&] {
                py::gil_scoped_release release;
                return run_rescaled(cfg, n, seed, s_max, avg_window.value_or(s_max / 2), o);
            }();
            py::dict d;
            d["series"] = series_dict(run.series);
            d["profile"] = profile_dict(run.profile);
            d["c0_hat"] = run.c0_hat;
            d["c1_hat"] = run.c1_hat;
            d["stationarity_residual"] = run.stationarity_residual;
            d["v_max"] = run.v_max;
            py::list hs;
            for (auto const& h : run.histograms)
                hs.append(profile_dict(h));
            d["histograms"] = hs;
            return d;
        },
        py::arg("e"), py::arg("tau") = py::none(), py::arg("n") = 20000, py::arg("seed") = 1,
        py::arg("s_max") = 200.0, py::arg("avg_window") = py::none(), py::arg("dim") = 3,
        py::arg("b1") = "isotropic", py::arg("b1_coef") = 0.0, py::arg("record_interval") = 1.0,
        py::arg("bins") = 64, py::arg("v_max") = 0.0, py::arg("init") = "maxwellian",
        py::arg("keep_histograms") = false, py::arg("elastic_diagnostic") = false);

    // Scaling and analysis
    m.def(
        "build_scaling_map",
        [](Array t, Array E, double tau, double a) {
            auto map = build_scaling_map(series_from(t, E, std::nullopt), tau, a);
            py::dict d;
            d["t"] = to_array(map.t);
            d["V"] = to_array(map.V);
            d["T"] = to_array(map.T);
            return d;
        },
        py::arg("t"), py::arg("E"), py::arg("tau"), py::arg("a"));
    m.def(
        "fit_cooling",
        [](Array t, Array E, double a, double transient_fraction) {
            auto f = fit_cooling(series_from(t, E, std::nullopt), a, transient_fraction);
            py::dict d;
            d["regime"] = to_string(f.regime);
            d["alpha"] = opt(f.alpha);
            d["slope"] = f.slope;
            d["intercept"] = f.intercept;
            d["slope_lo"] = f.slope_lo;
            d["slope_hi"] = f.slope_hi;
            d["r2"] = f.r2;
            d["t_lo"] = f.t_lo;
            d["t_hi"] = f.t_hi;
            d["exponent_hat"] = f.exponent_hat;
            d["Tc_hat"] = opt(f.Tc_hat);
            d["Tc_lo"] = opt(f.Tc_lo);
            d["Tc_hi"] = opt(f.Tc_hi);
            d["reliable"] = f.reliable;
            return d;
        },
        py::arg("t"), py::arg("E"), py::arg("a"), py::arg("transient_fraction") = 0.2);
    m.def(
        "check_moment_bound",
        [](Array t, Array E, Array m32) {
            auto c = check_moment_bound(series_from(t, E, m32));
            py::dict d;
            d["kappa_hat"] = c.kappa_hat;
            d["mu0_hat"] = c.mu0_hat;
            d["max_violation"] = c.max_violation;
            return d;
        },
        py::arg("t"), py::arg("E"), py::arg("m_three_half"));
    m.def(
        "fit_convergence",
        [](Array s, Array l1, double floor, double tau) {
            auto f = fit_convergence(to_vector(s), to_vector(l1), floor, tau);
            py::dict d;
            d["rate_hat"] = f.rate_hat;
            d["intercept"] = f.intercept;
            d["r2"] = f.r2;
            d["noise_floor"] = f.noise_floor;
            d["mu_e_check"] = f.mu_e_check;
            d["n_used"] = f.n_used;
            d["reliable"] = f.reliable;
            return d;
        },
        py::arg("s"), py::arg("l1"), py::arg("noise_floor"), py::arg("tau"));
    m.def(
        "bootstrap_noise_floor",
        [](py::dict profile, std::size_t n, std::size_t resamples, std::uint64_t seed) {
            return bootstrap_noise_floor(profile_from(profile), n, resamples, seed);
        },
        py::arg("profile"), py::arg("n_samples"), py::arg("resamples") = 200, py::arg("seed") = 1);

    // Command line entry point
    m.def(
        "run_cli",
        [](std::vector<std::string> const& args) {
            std::ostringstream out, err;
            int rc;
            {
                py::gil_scoped_release release;
                rc = cli::main(args, out, err);
            }
            return py::make_tuple(rc, out.str(), err.str());
        },
        py::arg("args"), "Run the granular command line; returns (exit_code, stdout, stderr).");
}
