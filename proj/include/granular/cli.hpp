#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "granular/errors.hpp"
#include "granular/kernel.hpp"

namespace granular::cli
{

inline constexpr char const* version = "0.1.0";
inline constexpr char const* out_dir_env = "GRANULAR_OUT_DIR";

enum class Mode
{
    physical,
    rescaled,
    coupled,
    fit,
    convergence
};
std::string to_string(Mode m);
//! Accepts the mode names and the subcommand alias "simulate".
Mode parse_mode(std::string const& name);

class UsageError : public InputError
{
  public:
    using InputError::InputError;
};

struct RunConfig
{
    std::optional<Mode> mode;
    int d = 3;
    std::size_t n = 20000;
    std::uint64_t seed = 1;
    double e = 0.9;
    double a = 0;
    //! Defaults to 1 - e.
    std::optional<double> tau;
    std::string b1 = "isotropic";
    double b1_coef = 0;
    double c_target = 0.05;
    double epsilon_stop = 1e-6;
    double t_max = 1000;
    double s_max = 200;
    //! Defaults to s_max / 2.
    std::optional<double> avg_window;
    double record_interval = 1.0;
    std::size_t bins = 64;
    //! 0 picks the bound from the balance energy.
    double v_max = 0;
    std::string out_dir;
    std::size_t snapshot_stride = 0;
    std::string init = "maxwellian";
    bool elastic_diagnostic = false;
    //! Series CSV to fit instead of simulating (fit mode).
    std::string input;
    double transient_fraction = 0.2;
};

//! Fills defaults (tau, avg_window, out_dir) and checks every range.
//! Throws UsageError.
void resolve(RunConfig& cfg);

KernelConfig kernel_config(RunConfig const& cfg);

//! Canonical JSON of a resolved config (sorted keys).
std::string config_json(RunConfig const& cfg, int indent = -1);

//! FNV-1a of the canonical JSON without out_dir.
std::string config_hash(RunConfig const& cfg);

//! Parse a JSON object; unknown keys are rejected. A run summary (an object
//! with a "config" member) is accepted as well.
RunConfig config_from_json_text(std::string const& text, RunConfig base = {});

/*!
 * Parse a command line (without the program name): a subcommand, an
 * optional --config file and flags overriding the file.
 *
 * Returns nullopt when help was requested (help text written to out).
 */
std::optional<RunConfig> parse_config(std::vector<std::string> const& args, std::ostream& out);

//! Execute a resolved config and write its artifacts. Returns the exit code.
int run(RunConfig const& cfg, std::ostream& log);

//! parse_config + run with the 0/1/2 exit code contract.
int main(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace granular::cli
