#include "granular/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <json.hpp>

#include "granular/analysis.hpp"
#include "granular/dsmc.hpp"
#include "granular/io.hpp"
#include "granular/rescaled.hpp"
#include "granular/scaling.hpp"

namespace granular::cli
{

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(Mode m)
{
    switch (m)
    {
        case Mode::physical: return "physical";
        case Mode::rescaled: return "rescaled";
        case Mode::coupled: return "coupled";
        case Mode::fit: return "fit";
        case Mode::convergence: return "convergence";
    }
    return "unknown";
}

Mode parse_mode(std::string const& name)
{
    if (name == "physical" || name == "simulate")
        return Mode::physical;
    if (name == "rescaled")
        return Mode::rescaled;
    if (name == "coupled")
        return Mode::coupled;
    if (name == "fit")
        return Mode::fit;
    if (name == "convergence")
        return Mode::convergence;
    throw UsageError("unknown mode '" + name + "'");
}

namespace
{
void require(bool ok, std::string const& msg)
{
    if (!ok)
        throw UsageError(msg);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0; }
}  // namespace

void resolve(RunConfig& cfg)
{
    require(cfg.mode.has_value(), "missing mode (use one of simulate, rescaled, coupled, fit, convergence)");
    require(cfg.d >= 2 && cfg.d <= 64, "d must lie in [2, 64]");
    require(cfg.n >= 2, "n must be at least 2");
    double const e_hi = cfg.elastic_diagnostic ? 1.0 : std::nextafter(1.0, 0.0);
    require(std::isfinite(cfg.e) && cfg.e >= 0 && cfg.e <= e_hi,
            cfg.elastic_diagnostic ? "e must lie in [0, 1]" : "e must lie in [0, 1)");
    require(std::isfinite(cfg.a) && cfg.a >= 0, "a must be >= 0");
    if (!cfg.tau)
        cfg.tau = 1.0 - cfg.e;
    if (cfg.elastic_diagnostic)
        require(std::isfinite(*cfg.tau) && *cfg.tau >= 0, "tau must be >= 0");
    else
        require(finite_positive(*cfg.tau), "tau must be positive (tau defaults to 1 - e)");
    require(cfg.b1 == "isotropic" || cfg.b1 == "linear-anisotropy",
            "b1 must be isotropic or linear-anisotropy");
    if (cfg.b1 == "isotropic")
        require(cfg.b1_coef == 0, "b1_coef only applies to linear-anisotropy");
    else
        require(std::isfinite(cfg.b1_coef) && std::fabs(cfg.b1_coef) < 1,
                "b1_coef must satisfy |b1_coef| < 1");
    require(finite_positive(cfg.c_target) && cfg.c_target <= 1, "c_target must lie in (0, 1]");
    require(cfg.epsilon_stop > 0 && cfg.epsilon_stop < 1, "epsilon_stop must lie in (0, 1)");
    require(finite_positive(cfg.t_max), "t_max must be positive");
    require(finite_positive(cfg.s_max), "s_max must be positive");
    if (!cfg.avg_window)
        cfg.avg_window = 0.5 * cfg.s_max;
    require(finite_positive(*cfg.avg_window) && *cfg.avg_window < cfg.s_max,
            "avg_window must lie in (0, s_max)");
    require(finite_positive(cfg.record_interval), "record_interval must be positive");
    require(cfg.bins >= 8, "bins must be at least 8");
    require(std::isfinite(cfg.v_max) && cfg.v_max >= 0, "v_max must be >= 0 (0 = automatic)");
    require(cfg.transient_fraction >= 0 && cfg.transient_fraction < 1,
            "transient_fraction must lie in [0, 1)");
    try
    {
        parse_initial_distribution(cfg.init);
    }
    catch (InputError const& ex)
    {
        throw UsageError(ex.what());
    }
    if (cfg.out_dir.empty())
    {
        char const* env = std::getenv(out_dir_env);
        cfg.out_dir = (env && *env) ? env : "granular_out";
    }
    try
    {
        kernel_config(cfg).validate();
    }
    catch (InputError const& ex)
    {
        throw UsageError(ex.what());
    }
}

KernelConfig kernel_config(RunConfig const& cfg)
{
    KernelConfig k;
    k.e = cfg.e;
    k.a = cfg.a;
    k.tau = cfg.tau.value_or(1.0 - cfg.e);
    k.dim = cfg.d;
    k.elastic_diagnostic = cfg.elastic_diagnostic;
    k.b1 = cfg.b1 == "linear-anisotropy" ? AngularWeight::make_linear_anisotropy(cfg.d, cfg.b1_coef)
                                         : AngularWeight::make_isotropic(cfg.d);
    return k;
}

namespace
{
json to_json(RunConfig const& cfg)
{
    json j;
    j["mode"] = cfg.mode ? json(to_string(*cfg.mode)) : json(nullptr);
    j["d"] = cfg.d;
    j["n"] = cfg.n;
    j["seed"] = cfg.seed;
    j["e"] = cfg.e;
    j["a"] = cfg.a;
    j["tau"] = cfg.tau ? json(*cfg.tau) : json(nullptr);
    j["b1"] = cfg.b1;
    j["b1_coef"] = cfg.b1_coef;
    j["c_target"] = cfg.c_target;
    j["epsilon_stop"] = cfg.epsilon_stop;
    j["t_max"] = cfg.t_max;
    j["s_max"] = cfg.s_max;
    j["avg_window"] = cfg.avg_window ? json(*cfg.avg_window) : json(nullptr);
    j["record_interval"] = cfg.record_interval;
    j["bins"] = cfg.bins;
    j["v_max"] = cfg.v_max;
    j["out_dir"] = cfg.out_dir;
    j["snapshot_stride"] = cfg.snapshot_stride;
    j["init"] = cfg.init;
    j["elastic_diagnostic"] = cfg.elastic_diagnostic;
    j["input"] = cfg.input;
    j["transient_fraction"] = cfg.transient_fraction;
    return j;
}

template <class T>
T get_as(json const& v, char const* key)
{
    try
    {
        return v.get<T>();
    }
    catch (json::exception const&)
    {
        throw UsageError(std::string("config key '") + key + "' has the wrong type");
    }
}

double get_number(json const& v, char const* key)
{
    if (!v.is_number())
        throw UsageError(std::string("config key '") + key + "' must be a number");
    return v.get<double>();
}

std::size_t get_count(json const& v, char const* key)
{
    if (!v.is_number_unsigned())
        throw UsageError(std::string("config key '") + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}
}  // namespace

std::string config_json(RunConfig const& cfg, int indent) { return to_json(cfg).dump(indent); }

std::string config_hash(RunConfig const& cfg)
{
    json j = to_json(cfg);
    j.erase("out_dir");
    return io::fnv1a_hex(j.dump());
}

RunConfig config_from_json_text(std::string const& text, RunConfig base)
{
    json j;
    try
    {
        j = json::parse(text);
    }
    catch (json::parse_error const& ex)
    {
        throw UsageError(std::string("config is not valid JSON: ") + ex.what());
    }
    if (j.is_object() && j.contains("config") && j["config"].is_object())
        j = j["config"];
    if (!j.is_object())
        throw UsageError("config must be a JSON object");

    RunConfig c = std::move(base);
    for (auto it = j.begin(); it != j.end(); ++it)
    {
        auto const& k = it.key();
        auto const& v = it.value();
        char const* key = k.c_str();
        if (k == "mode")
        {
            if (!v.is_null())
                c.mode = parse_mode(get_as<std::string>(v, key));
        }
        else if (k == "d")
            c.d = static_cast<int>(get_count(v, key));
        else if (k == "n")
            c.n = get_count(v, key);
        else if (k == "seed")
            c.seed = get_count(v, key);
        else if (k == "e")
            c.e = get_number(v, key);
        else if (k == "a")
            c.a = get_number(v, key);
        else if (k == "tau")
        {
            if (v.is_null())
                c.tau.reset();
            else
                c.tau = get_number(v, key);
        }
        else if (k == "b1")
            c.b1 = get_as<std::string>(v, key);
        else if (k == "b1_coef")
            c.b1_coef = get_number(v, key);
        else if (k == "c_target")
            c.c_target = get_number(v, key);
        else if (k == "epsilon_stop")
            c.epsilon_stop = get_number(v, key);
        else if (k == "t_max")
            c.t_max = get_number(v, key);
        else if (k == "s_max")
            c.s_max = get_number(v, key);
        else if (k == "avg_window")
        {
            if (v.is_null())
                c.avg_window.reset();
            else
                c.avg_window = get_number(v, key);
        }
        else if (k == "record_interval")
            c.record_interval = get_number(v, key);
        else if (k == "bins")
            c.bins = get_count(v, key);
        else if (k == "v_max")
            c.v_max = get_number(v, key);
        else if (k == "out_dir")
            c.out_dir = get_as<std::string>(v, key);
        else if (k == "snapshot_stride")
            c.snapshot_stride = get_count(v, key);
        else if (k == "init")
            c.init = get_as<std::string>(v, key);
        else if (k == "elastic_diagnostic")
            c.elastic_diagnostic = get_as<bool>(v, key);
        else if (k == "input")
            c.input = get_as<std::string>(v, key);
        else if (k == "transient_fraction")
            c.transient_fraction = get_number(v, key);
        else
            throw UsageError("unknown config key '" + k + "'");
    }
    return c;
}

std::optional<RunConfig> parse_config(std::vector<std::string> const& args, std::ostream& out)
{
    CLI::App app{"DSMC solver for the homogeneous inelastic Boltzmann equation", "granular"};
    app.fallthrough();

    std::string config_file;
    std::optional<int> d;
    std::optional<std::size_t> n, bins, snapshot_stride;
    std::optional<std::uint64_t> seed;
    std::optional<double> e, a, tau, b1_coef, c_target, epsilon_stop, t_max, s_max, avg_window,
        record_interval, v_max, transient_fraction;
    std::optional<std::string> b1, out_dir, init, input;
    bool elastic = false;

    app.add_option("--config", config_file, "JSON config or run summary; flags override it");
    app.add_option("--d", d, "velocity dimension");
    app.add_option("--n", n, "number of particles");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--e", e, "restitution coefficient");
    app.add_option("--a", a, "anomaly exponent");
    app.add_option("--tau", tau, "drift strength (default 1 - e)");
    app.add_option("--b1", b1, "angular weight: isotropic | linear-anisotropy");
    app.add_option("--b1-coef", b1_coef, "linear anisotropy coefficient");
    app.add_option("--c-target", c_target, "collisions per particle per step");
    app.add_option("--epsilon-stop", epsilon_stop, "energy at which blow-up counts as resolved");
    app.add_option("--t-max", t_max, "physical time horizon");
    app.add_option("--s-max", s_max, "rescaled time horizon");
    app.add_option("--avg-window", avg_window, "trailing averaging window (default s_max/2)");
    app.add_option("--record-interval", record_interval, "rescaled record spacing");
    app.add_option("--bins", bins, "speed histogram bins");
    app.add_option("--v-max", v_max, "histogram upper edge (0 = automatic)");
    app.add_option("--out-dir", out_dir, std::string("output directory (default $") + out_dir_env + ")");
    app.add_option("--snapshot-stride", snapshot_stride, "write an ensemble snapshot every k steps");
    app.add_option("--init", init, "maxwellian | uniform-ball | two-temperature");
    app.add_flag("--elastic-diagnostic", elastic, "allow e = 1");
    app.add_option("--input", input, "series CSV to fit (fit mode)");
    app.add_option("--transient-fraction", transient_fraction, "discarded leading fraction of the fit");

    auto* sim = app.add_subcommand("simulate", "cooling run in physical variables");
    auto* res = app.add_subcommand("rescaled", "self-similar drift-collision run");
    auto* cpl = app.add_subcommand("coupled", "physical run plus rescaled run and frame check");
    auto* fit = app.add_subcommand("fit", "cooling-law fit of a physical run or series CSV");
    auto* cnv = app.add_subcommand("convergence", "L1 decay toward the terminal profile");
    app.require_subcommand(0, 1);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try
    {
        app.parse(rev);
    }
    catch (CLI::CallForHelp const&)
    {
        out << app.help();
        return std::nullopt;
    }
    catch (CLI::CallForAllHelp const&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    }
    catch (CLI::ParseError const& ex)
    {
        throw UsageError(ex.what());
    }

    RunConfig cfg;
    if (!config_file.empty())
    {
        std::ifstream is(config_file);
        if (!is)
            throw UsageError("cannot read config file " + config_file);
        std::stringstream ss;
        ss << is.rdbuf();
        cfg = config_from_json_text(ss.str());
    }

    if (sim->parsed())
        cfg.mode = Mode::physical;
    else if (res->parsed())
        cfg.mode = Mode::rescaled;
    else if (cpl->parsed())
        cfg.mode = Mode::coupled;
    else if (fit->parsed())
        cfg.mode = Mode::fit;
    else if (cnv->parsed())
        cfg.mode = Mode::convergence;

    if (d)
        cfg.d = *d;
    if (n)
        cfg.n = *n;
    if (seed)
        cfg.seed = *seed;
    if (e)
        cfg.e = *e;
    if (a)
        cfg.a = *a;
    if (tau)
        cfg.tau = *tau;
    if (b1)
        cfg.b1 = *b1;
    if (b1_coef)
        cfg.b1_coef = *b1_coef;
    if (c_target)
        cfg.c_target = *c_target;
    if (epsilon_stop)
        cfg.epsilon_stop = *epsilon_stop;
    if (t_max)
        cfg.t_max = *t_max;
    if (s_max)
        cfg.s_max = *s_max;
    if (avg_window)
        cfg.avg_window = *avg_window;
    if (record_interval)
        cfg.record_interval = *record_interval;
    if (bins)
        cfg.bins = *bins;
    if (v_max)
        cfg.v_max = *v_max;
    if (out_dir)
        cfg.out_dir = *out_dir;
    if (snapshot_stride)
        cfg.snapshot_stride = *snapshot_stride;
    if (init)
        cfg.init = *init;
    if (elastic)
        cfg.elastic_diagnostic = true;
    if (input)
        cfg.input = *input;
    if (transient_fraction)
        cfg.transient_fraction = *transient_fraction;

    resolve(cfg);
    return cfg;
}

//---------------------------------------------------------------------------//
// Artifact emission

namespace
{
template <class Writer>
void emit(fs::path const& path, Writer&& w)
{
    std::ostringstream os;
    w(os);
    io::write_file(path, os.str());
}

json summary_header(RunConfig const& cfg, std::string const& hash)
{
    json s;
    s["config"] = to_json(cfg);
    s["config_hash"] = hash;
    s["granular_version"] = version;
    s["boost_version"] = BOOST_LIB_VERSION;
#ifdef __VERSION__
    s["compiler"] = __VERSION__;
#endif
    return s;
}

json cooling_fit_json(CoolingFit const& f)
{
    json j;
    j["a"] = f.a;
    j["alpha"] = f.alpha ? json(*f.alpha) : json(nullptr);
    j["regime"] = to_string(f.regime);
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["slope_lo"] = f.slope_lo;
    j["slope_hi"] = f.slope_hi;
    j["r2"] = f.r2;
    j["fit_window"] = {f.t_lo, f.t_hi};
    j["exponent_hat"] = std::isfinite(f.exponent_hat) ? json(f.exponent_hat) : json(nullptr);
    j["Tc_hat"] = f.Tc_hat ? json(*f.Tc_hat) : json(nullptr);
    j["Tc_lo"] = f.Tc_lo ? json(*f.Tc_lo) : json(nullptr);
    j["Tc_hi"] = f.Tc_hi ? json(*f.Tc_hi) : json(nullptr);
    j["reliable"] = f.reliable;
    return j;
}

DsmcOptions dsmc_options(RunConfig const& cfg)
{
    DsmcOptions o;
    o.c_target = cfg.c_target;
    o.init = parse_initial_distribution(cfg.init);
    o.snapshot_stride = cfg.snapshot_stride;
    return o;
}

RescaledOptions rescaled_options(RunConfig const& cfg, bool keep_histograms)
{
    RescaledOptions o;
    o.c_target = cfg.c_target;
    o.record_interval = cfg.record_interval;
    o.bins = cfg.bins;
    o.v_max = cfg.v_max;
    o.init = parse_initial_distribution(cfg.init);
    o.keep_histograms = keep_histograms;
    return o;
}

PhysicalRun simulate(RunConfig const& cfg, fs::path const& dir, std::string const& hash)
{
    SnapshotCallback snap;
    if (cfg.snapshot_stride > 0)
    {
        fs::create_directories(dir / "snapshots");
        snap = [&](DsmcState const& st) {
            std::ostringstream name;
            name << "snapshot_" << std::setw(8) << std::setfill('0') << st.steps << ".csv";
            emit(dir / "snapshots" / name.str(),
                 [&](std::ostream& os) { io::write_snapshot_csv(os, st.ens, hash); });
        };
    }
    return run_physical(kernel_config(cfg), cfg.n, cfg.seed, cfg.epsilon_stop, cfg.t_max,
                        dsmc_options(cfg), snap);
}

void physical_summary(json& s, PhysicalRun const& run)
{
    s["halt_reason"] = to_string(run.halt);
    s["t_final"] = run.final_state.t;
    s["E_final"] = run.series.back().E;
    s["steps"] = run.final_state.steps;
    s["n_collisions"] = run.final_state.n_collisions;
    s["records"] = run.series.size();
}

void rescaled_summary(json& s, RescaledRun const& run)
{
    s["halt_reason"] = "horizon";
    s["s_final"] = run.series.back().t;
    s["E_final"] = run.series.back().E;
    s["c0_hat"] = run.c0_hat;
    s["c1_hat"] = run.c1_hat;
    s["band_ratio"] = run.c1_hat / run.c0_hat;
    s["stationarity_residual"] = run.stationarity_residual;
    s["v_max"] = run.v_max;
    s["records"] = run.series.size();
}
}  // namespace

int run(RunConfig const& cfg_in, std::ostream& log)
{
    RunConfig cfg = cfg_in;
    resolve(cfg);
    fs::path const dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw UsageError("cannot create output directory " + dir.string());

    std::string const hash = config_hash(cfg);
    json summary = summary_header(cfg, hash);
    auto const mode = *cfg.mode;
    summary["mode"] = to_string(mode);
    auto const series_csv = [&](fs::path const& p, MomentSeries const& s) {
        emit(p, [&](std::ostream& os) { io::write_series_csv(os, s, hash); });
    };

    switch (mode)
    {
        case Mode::physical:
        {
            auto const r = simulate(cfg, dir, hash);
            series_csv(dir / "series.csv", r.series);
            physical_summary(summary, r);
            log << "halt: " << to_string(r.halt) << " at t = " << r.final_state.t
                << ", E = " << r.series.back().E << '\n';
            break;
        }
        case Mode::rescaled:
        {
            auto const r = run_rescaled(kernel_config(cfg), cfg.n, cfg.seed, cfg.s_max,
                                        *cfg.avg_window, rescaled_options(cfg, false));
            series_csv(dir / "series.csv", r.series);
            emit(dir / "profile.csv",
                 [&](std::ostream& os) { io::write_profile_csv(os, r.profile, hash); });
            rescaled_summary(summary, r);
            log << "c0_hat = " << r.c0_hat << ", c1_hat = " << r.c1_hat
                << ", residual = " << r.stationarity_residual << '\n';
            break;
        }
        case Mode::coupled:
        {
            auto const phys = simulate(cfg, dir, hash);
            auto const map = build_scaling_map(phys.series, *cfg.tau, cfg.a);
            double const T_end = map.T.back();
            double const s_max
                = cfg.record_interval * (std::ceil(T_end / cfg.record_interval) + 2.0);
            auto const resc = run_rescaled(kernel_config(cfg), cfg.n, cfg.seed, s_max, 0.5 * s_max,
                                           rescaled_options(cfg, false));
            double const err = verify_energy_coupling(phys.series, resc.series, map);
            series_csv(dir / "physical_series.csv", phys.series);
            series_csv(dir / "rescaled_series.csv", resc.series);
            emit(dir / "scaling_map.csv",
                 [&](std::ostream& os) { io::write_scaling_csv(os, map, hash); });
            physical_summary(summary, phys);
            summary["T_end"] = T_end;
            summary["V_end"] = map.V.back();
            summary["rescaled_s_max"] = s_max;
            summary["max_rel_error"] = err;
            log << "coupling max relative error = " << err << '\n';
            break;
        }
        case Mode::fit:
        {
            MomentSeries series;
            if (!cfg.input.empty())
            {
                std::ifstream is(cfg.input);
                if (!is)
                    throw UsageError("cannot read input series " + cfg.input);
                series = io::read_series_csv(is);
                summary["halt_reason"] = nullptr;
            }
            else
            {
                auto r = simulate(cfg, dir, hash);
                series_csv(dir / "series.csv", r.series);
                physical_summary(summary, r);
                series = std::move(r.series);
            }
            auto const f = fit_cooling(series, cfg.a, cfg.transient_fraction);
            json fj = cooling_fit_json(f);
            fj["config_hash"] = hash;
            if (cfg.a == 0 && !series.empty() && std::isfinite(series.back().m_three_half))
            {
                auto const mb = check_moment_bound(series);
                fj["moment_bound"]
                    = {{"kappa_hat", mb.kappa_hat}, {"mu0_hat", mb.mu0_hat}, {"max_violation", mb.max_violation}};
            }
            emit(dir / "fit.json", [&](std::ostream& os) { os << fj.dump(2) << '\n'; });
            summary["fit_reliable"] = f.reliable;
            log << "fit: slope = " << f.slope << ", r2 = " << f.r2
                << (f.reliable ? "" : " (unreliable)") << '\n';
            break;
        }
        case Mode::convergence:
        {
            auto const r = run_rescaled(kernel_config(cfg), cfg.n, cfg.seed, cfg.s_max,
                                        *cfg.avg_window, rescaled_options(cfg, true));
            std::vector<double> s, l1;
            for (std::size_t k = 0; k < r.histograms.size(); ++k)
            {
                s.push_back(r.series[k].t);
                l1.push_back(l1_distance(r.histograms[k], r.profile));
            }
            double const floor = bootstrap_noise_floor(r.profile, cfg.n);
            auto const cf = fit_convergence(s, l1, floor, *cfg.tau);
            series_csv(dir / "series.csv", r.series);
            emit(dir / "profile.csv",
                 [&](std::ostream& os) { io::write_profile_csv(os, r.profile, hash); });
            emit(dir / "l1.csv", [&](std::ostream& os) { io::write_l1_csv(os, s, l1, hash); });
            json cj = {{"rate_hat", cf.rate_hat},
                       {"intercept", cf.intercept},
                       {"r2", cf.r2},
                       {"noise_floor", cf.noise_floor},
                       {"mu_e_check", cf.mu_e_check},
                       {"n_used", cf.n_used},
                       {"reliable", cf.reliable},
                       {"config_hash", hash}};
            emit(dir / "convergence.json", [&](std::ostream& os) { os << cj.dump(2) << '\n'; });
            rescaled_summary(summary, r);
            summary["fit_reliable"] = cf.reliable;
            log << "convergence: rate = " << cf.rate_hat << ", r2 = " << cf.r2
                << (cf.reliable ? "" : " (unreliable)") << '\n';
            break;
        }
    }

    emit(dir / "summary.json", [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
    return 0;
}

int main(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    try
    {
        auto cfg = parse_config(args, out);
        if (!cfg)
            return 0;
        return run(*cfg, out);
    }
    catch (InputError const& ex)
    {
        err << "usage error: " << ex.what() << '\n';
        return 2;
    }
    catch (PreconditionError const& ex)
    {
        err << "usage error: " << ex.what() << '\n';
        return 2;
    }
    catch (DivergenceError const& ex)
    {
        err << "numerical failure: " << ex.what() << " (s = " << ex.s() << ", E = " << ex.energy()
            << ")\n";
        return 1;
    }
    catch (NumericalError const& ex)
    {
        err << "numerical failure: " << ex.what() << '\n';
        return 1;
    }
    catch (InternalError const& ex)
    {
        err << "numerical failure: " << ex.what() << '\n';
        return 1;
    }
    catch (fs::filesystem_error const& ex)
    {
        err << "usage error: " << ex.what() << '\n';
        return 2;
    }
}

}  // namespace granular::cli
