#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cnslab/params.hpp"

namespace cnslab {

// Flat key-value run configuration shared by all subcommands.  Keys are listed
// in the README; a manifest written by a run is itself a loadable config.
struct RunConfig {
    std::string subcommand;

    FluidParams params;

    // grid
    double r_min = 0.0;
    double r_max = 1.0;
    int cells = 200;

    // boundaries: wall | axis | outflow | exact ("auto" picks axis at r_min = 0,
    // wall otherwise, and exact for the exact-forced scenario)
    std::string bc_inner = "auto";
    std::string bc_outer = "auto";

    // scenario
    std::string scenario = "gaussian-bump";  // rest | gaussian-bump | exact-forced | custom-from-file
    std::string state_file;                  // custom-from-file initial data (CSV r,rho,u)
    double rho0 = 1.0;
    double bump_base = 1.0;
    double bump_amp = 0.5;
    std::optional<double> bump_center;  // default: domain midpoint
    std::optional<double> bump_width;   // default: a tenth of the domain
    double blowup_time = 1.0;           // T of the exact solution

    // numerics
    double cfl = 0.4;
    double density_floor = 1e-10;
    double dt_min = 1e-12;
    double t_end = 0.5;
    std::vector<double> snapshots;

    // diagnostics
    double q = 4.0;
    double p = 4.0;
    std::optional<double> t_ref;
    bool effective_flux = false;
    std::string flux_bc = "auto";  // bounded | free ("auto": bounded for wall runs)

    // output
    std::string out_dir = "out";

    // scale-check
    double kappa = 2.0;
    double t1 = 0.05;
    double t2 = 0.25;
    std::vector<int> levels = {200, 400, 800};
    int interp_order = 3;

    // criteria
    std::vector<double> gamma_list = {1.0, 2.0, 3.0};

    // exact sample grid
    double sample_r_lo = 0.1;
    double sample_r_hi = 1.0;
    int sample_nr = 32;
    double sample_t_lo = 0.0;
    std::optional<double> sample_t_hi;  // default 0.9 T
    int sample_nt = 9;
    double h_fd = 0.0;  // 0 disables the finite-difference cross-check

    // profile-check
    double obstruction_p = 2.0;
    double obstruction_radius = 1.0;
    double y_lo = 0.05;
    double y_hi = 2.0;
    int ny = 64;

    // diagnose
    std::string input;  // diagnostics CSV to post-process
    std::optional<double> fit_lo, fit_hi;
};

// Applies "key = value" lines from a flat config file; '#' starts a comment.
// Unknown keys raise ConfigError.
void apply_config_file(RunConfig& config, const std::string& path);
void apply_key_value(RunConfig& config, const std::string& key, const std::string& value);

// All keys in canonical order with current values (manifest body).
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

// Structural validation: params admissible, files exist, ranges sane.
// Throws ConfigError / ConstraintViolation.
void validate(const RunConfig& config);

}  // namespace cnslab
