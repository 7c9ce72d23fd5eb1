// Command-line entry point: every config key is mirrored as a flag, flags
// override values loaded with --config, and each subcommand writes its CSV
// artifacts plus a reloadable manifest.

#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "cnslab/config.hpp"
#include "cnslab/errors.hpp"
#include "cnslab/runner.hpp"

namespace {

struct Cli {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_keys(CLI::App* cmd, Cli& cli, const std::vector<std::string>& keys) {
    cmd->add_option("--config", cli.config_file, "flat key = value config file");
    for (const auto& key : keys) {
        auto* opt = cmd->add_option("--" + key);
        opt->type_name("VALUE");
        opt->each([&cli, key](const std::string& v) { cli.overrides.emplace_back(key, v); });
    }
}

const std::vector<std::string> physics_keys = {"gamma", "A", "mu", "lambda", "n"};
const std::vector<std::string> grid_keys = {"r_min", "r_max", "cells"};
const std::vector<std::string> run_keys = {
    "bc_inner", "bc_outer", "scenario", "state_file", "rho0", "bump_base", "bump_amp",
    "bump_center", "bump_width", "T", "cfl", "floor", "dt_min", "t_end", "snapshots",
    "q", "p", "t_ref", "effective_flux", "flux_bc", "out_dir"};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> lists) {
    std::vector<std::string> out;
    for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale laboratory for the barotropic compressible Navier-Stokes system"};
    app.require_subcommand(0, 1);

    Cli cli;
    struct Sub {
        CLI::App* cmd;
        std::string name;
    };
    std::vector<Sub> subs;
    auto make = [&](const std::string& name, const std::string& desc,
                    const std::vector<std::string>& keys) {
        auto* cmd = app.add_subcommand(name, desc);
        add_keys(cmd, cli, keys);
        subs.push_back({cmd, name});
    };

    make("simulate", "advance a radial finite-volume run and record diagnostics",
         concat({physics_keys, grid_keys, run_keys}));
    make("exact", "evaluate the closed-form blowup solution and its residuals",
         concat({physics_keys,
                 {"T", "sample_r_lo", "sample_r_hi", "sample_nr", "sample_t_lo",
                  "sample_t_hi", "sample_nt", "h_fd", "out_dir"}}));
    make("criteria", "print the threshold constants table (CSV to stdout)",
         concat({physics_keys, {"gamma_list"}}));
    make("profile-check", "residuals of the similarity profile and the L^p inequality",
         concat({physics_keys,
                 {"y_lo", "y_hi", "ny", "obstruction_p", "obstruction_radius", "out_dir"}}));
    make("scale-check", "rescaled re-simulation discrepancy across refinement levels",
         concat({physics_keys, grid_keys,
                 {"scenario", "bump_base", "bump_amp", "bump_center", "bump_width", "T",
                  "cfl", "floor", "dt_min", "kappa", "t1", "t2", "levels", "interp_order",
                  "out_dir"}}));
    make("diagnose", "post-process a diagnostics CSV into fits and pass/fail lines",
         {"input", "fit_lo", "fit_hi", "out_dir"});
    make("run", "run the subcommand named in the config file (manifest replay)",
         concat({physics_keys, grid_keys, run_keys,
                 {"kappa", "t1", "t2", "levels", "interp_order", "gamma_list",
                  "sample_r_lo", "sample_r_hi", "sample_nr", "sample_t_lo", "sample_t_hi",
                  "sample_nt", "h_fd", "obstruction_p", "obstruction_radius", "y_lo",
                  "y_hi", "ny", "input", "fit_lo", "fit_hi"}}));

    CLI11_PARSE(app, argc, argv);

    std::string chosen;
    for (const auto& sub : subs) {
        if (sub.cmd->parsed()) chosen = sub.name;
    }
    if (chosen.empty()) {
        std::cout << app.help();
        return 0;
    }

    cnslab::RunConfig config;
    try {
        if (!cli.config_file.empty()) cnslab::apply_config_file(config, cli.config_file);
        if (chosen != "run") config.subcommand = chosen;
        for (const auto& [key, value] : cli.overrides) {
            cnslab::apply_key_value(config, key, value);
        }
        if (config.subcommand.empty()) {
            throw cnslab::Error(cnslab::ErrorCode::config_error,
                                "run needs a config with a subcommand key");
        }
    } catch (const cnslab::Error& e) {
        std::cerr << "error (" << cnslab::error_code_name(e.code()) << "): " << e.what()
                  << "\n";
        return e.exit_code();
    }
    return cnslab::run(config);
}
