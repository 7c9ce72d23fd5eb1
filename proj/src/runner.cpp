#include "cnslab/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cnslab/csv.hpp"
#include "cnslab/diagnostics.hpp"
#include "cnslab/elliptic_flux.hpp"
#include "cnslab/errors.hpp"
#include "cnslab/exact_solution.hpp"
#include "cnslab/profile.hpp"
#include "cnslab/scaling.hpp"
#include "cnslab/solver.hpp"

namespace cnslab {

namespace fs = std::filesystem;

namespace {

std::string resolve_out_dir(const RunConfig& cfg) {
    fs::path dir = cfg.out_dir;
    const char* root = std::getenv("CNSLAB_OUT_ROOT");
    if (root && *root && dir.is_relative()) dir = fs::path(root) / dir;
    return dir.string();
}

std::string run_id(const RunConfig& cfg) {
    // FNV-1a over the canonical config text; the output location does not
    // change what is computed, so it stays out of the id
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& [k, v] : config_entries(cfg)) {
        if (k == "out_dir") continue;
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const RunConfig& cfg, const std::string& dir, const std::string& status,
                    double wall_seconds, const std::vector<std::string>& notes = {}) {
    std::ofstream out(fs::path(dir) / "manifest.cfg");
    if (!out) throw Error(ErrorCode::config_error, "cannot write manifest in " + dir);
    out << "# manifest; this file is a loadable config (cnslab run --config ...)\n";
    out << "# version = " << project_version << "\n";
    out << "# run_id = " << run_id(cfg) << "\n";
    out << "# status = " << status << "\n";
    char wall[32];
    std::snprintf(wall, sizeof(wall), "%.3f", wall_seconds);
    out << "# wall_time_s = " << wall << "\n";
    for (const auto& n : notes) out << "# " << n << "\n";
    for (const auto& [k, v] : config_entries(cfg)) out << k << " = " << v << "\n";
}

std::ofstream open_artifact(const std::string& dir, const std::string& name) {
    fs::path p = fs::path(dir) / name;
    std::ofstream out(p);
    if (!out) throw Error(ErrorCode::config_error, "cannot write " + p.string());
    return out;
}

BcKind bc_kind(const std::string& name, bool inner, const RunConfig& cfg) {
    std::string v = name;
    if (v == "auto") {
        if (cfg.scenario == "exact-forced") {
            v = "exact";
        } else if (inner) {
            v = cfg.r_min == 0.0 ? "axis" : "wall";
        } else {
            v = "wall";
        }
    }
    if (v == "wall") return BcKind::wall;
    if (v == "axis") return BcKind::axis;
    if (v == "outflow") return BcKind::outflow;
    if (v == "exact") return BcKind::exact_forced;
    throw Error(ErrorCode::config_error, "unknown boundary kind: " + name);
}

GaussianBump resolve_bump(const RunConfig& cfg) {
    GaussianBump bump;
    bump.base = cfg.bump_base;
    bump.amplitude = cfg.bump_amp;
    bump.center = cfg.bump_center ? *cfg.bump_center : 0.5 * (cfg.r_min + cfg.r_max);
    bump.width = cfg.bump_width ? *cfg.bump_width : 0.1 * (cfg.r_max - cfg.r_min);
    return bump;
}

State initial_state(const RunConfig& cfg, const RadialGrid& grid,
                    const BoundaryCondition& bc) {
    if (cfg.scenario == "rest") return rest_state(grid, cfg.rho0);
    if (cfg.scenario == "gaussian-bump") return gaussian_bump_state(grid, resolve_bump(cfg));
    if (cfg.scenario == "exact-forced") {
        if (!bc.forcing) {
            throw Error(ErrorCode::config_error, "exact-forced scenario needs exact boundaries");
        }
        return exact_state(*bc.forcing, grid, 0.0);
    }
    // custom-from-file: columns r, rho, u matching the grid centers
    CsvTable table = read_csv(cfg.state_file);
    int cr = table.column("r"), crho = table.column("rho"), cu = table.column("u");
    if (cr < 0 || crho < 0 || cu < 0) {
        throw Error(ErrorCode::config_error, "state_file needs columns r, rho, u");
    }
    if (static_cast<int>(table.rows.size()) != grid.cells) {
        throw Error(ErrorCode::config_error, "state_file row count does not match cells");
    }
    State s;
    s.rho.resize(grid.cells);
    s.u.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
        if (std::abs(table.rows[i][cr] - grid.center(i)) > 1e-6 * grid.spacing()) {
            throw Error(ErrorCode::config_error, "state_file radii do not match the grid");
        }
        s.rho[i] = table.rows[i][crho];
        s.u[i] = table.rows[i][cu];
    }
    auto it = table.meta.find("t");
    if (it != table.meta.end()) s.t = std::strtod(it->second.c_str(), nullptr);
    return s;
}

void csv_meta(CsvWriter& w, const RunConfig& cfg) {
    w.comment("run_id = " + run_id(cfg));
    w.comment("gamma = " + format_double(cfg.params.gamma));
    w.comment("A = " + format_double(cfg.params.A));
    w.comment("mu = " + format_double(cfg.params.mu));
    w.comment("lambda = " + format_double(cfg.params.lambda));
    w.comment("n = " + std::to_string(cfg.params.n));
    w.comment("grid = [" + format_double(cfg.r_min) + ", " + format_double(cfg.r_max) +
              "] x " + std::to_string(cfg.cells));
    w.comment("scenario = " + cfg.scenario);
}

void write_snapshots(const RunConfig& cfg, const std::string& dir,
                     const std::vector<State>& snaps, const RadialGrid& grid,
                     bool with_omega) {
    auto file = open_artifact(dir, "snapshots.csv");
    CsvWriter w(file);
    csv_meta(w, cfg);
    std::vector<std::string> cols = {"t", "r", "rho", "u"};
    if (with_omega) cols.push_back("omega");
    w.header(cols);
    LameBc lame = cfg.flux_bc == "free" ? LameBc::free_space : LameBc::bounded;
    for (const auto& s : snaps) {
        std::vector<double> omega;
        if (with_omega) {
            auto field = solve_lame_radial(s.rho, grid, cfg.params, lame);
            omega = effective_flux(s.u, field);
        }
        for (int i = 0; i < grid.cells; ++i) {
            std::vector<double> row = {s.t, grid.center(i), s.rho[i], s.u[i]};
            if (with_omega) row.push_back(omega[i]);
            w.row(row);
        }
    }
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int run_simulate(const RunConfig& cfg, const std::string& dir, double& wall_ref,
                 std::chrono::steady_clock::time_point started) {
    RadialGrid grid{cfg.r_min, cfg.r_max, cfg.cells};
    BoundaryCondition bc;
    bc.inner = bc_kind(cfg.bc_inner, true, cfg);
    bc.outer = bc_kind(cfg.bc_outer, false, cfg);
    if (bc.inner == BcKind::exact_forced || bc.outer == BcKind::exact_forced) {
        bc.forcing = ExactBlowup(cfg.params, cfg.blowup_time);
    }
    SolverOptions opts{cfg.cfl, cfg.density_floor, cfg.dt_min};
    State init = initial_state(cfg, grid, bc);

    auto bc_name = [](BcKind k) {
        switch (k) {
            case BcKind::wall: return "wall";
            case BcKind::axis: return "axis";
            case BcKind::outflow: return "outflow";
            case BcKind::exact_forced: return "exact";
        }
        return "wall";
    };
    auto diag_file = open_artifact(dir, "diagnostics.csv");
    CsvWriter diag_csv(diag_file);
    csv_meta(diag_csv, cfg);
    diag_csv.comment(std::string("bc_inner_resolved = ") + bc_name(bc.inner));
    diag_csv.comment(std::string("bc_outer_resolved = ") + bc_name(bc.outer));
    std::vector<std::string> cols = {
        "t", "mass", "e_kin", "e_pot", "dissipation_acc", "balance_residual",
        "max_rho", "max_divu", "type1_indicator", "grad_rho_lq", "grad_u_l2",
        "weighted_lp", "floored_mass_acc", "bound_slack"};
    if (cfg.effective_flux) cols.push_back("grad_omega_l2");
    diag_csv.header(cols);

    DiagnosticsOptions diag;
    diag.enabled = true;
    diag.keep_in_memory = false;
    diag.q = cfg.q;
    diag.p = cfg.p;
    diag.t_ref = cfg.t_ref;
    if (!diag.t_ref && cfg.scenario == "exact-forced") diag.t_ref = cfg.blowup_time;
    diag.effective_flux = cfg.effective_flux;
    diag.flux_bc = cfg.flux_bc == "free" ||
                           (cfg.flux_bc == "auto" && bc.outer != BcKind::wall)
                       ? LameBc::free_space
                       : LameBc::bounded;
    (void)0;
    diag.row_sink = [&](const DiagRow& row) {
        std::vector<double> vals = {row.t, row.mass, row.e_kin, row.e_pot,
                                    row.dissipation_acc, row.balance_residual, row.max_rho,
                                    row.max_divu, row.type1_indicator, row.grad_rho_lq,
                                    row.grad_u_l2, row.weighted_lp, row.floored_mass_acc,
                                    row.bound_slack};
        if (row.grad_omega_l2) vals.push_back(*row.grad_omega_l2);
        diag_csv.row(vals);
    };

    try {
        Trajectory traj = simulate(init, grid, cfg.params, bc, opts, cfg.t_end,
                                   cfg.snapshots, diag);
        write_snapshots(cfg, dir, traj.snapshots, grid, cfg.effective_flux);
        wall_ref = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(cfg, dir, "completed", wall_ref,
                       {"floored_mass_total = " + format_double(traj.floored_mass_total)});
        return 0;
    } catch (const BlowupError& err) {
        if (err.partial()) {
            write_snapshots(cfg, dir, err.partial()->snapshots, grid, cfg.effective_flux);
        }
        wall_ref = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(cfg, dir, "blowup_detected", wall_ref,
                       {std::string("stop_reason = ") + err.what(),
                        "note = blowup detection counts as success for blowup hunts"});
        std::cerr << "blowup detected: " << err.what() << "\n";
        return 4;
    }
}

int run_exact(const RunConfig& cfg, const std::string& dir) {
    ExactBlowup sol(cfg.params, cfg.blowup_time);
    double t_hi = cfg.sample_t_hi ? *cfg.sample_t_hi : 0.9 * cfg.blowup_time;

    auto file = open_artifact(dir, "exact.csv");
    CsvWriter w(file);
    csv_meta(w, cfg);
    std::vector<std::string> cols = {"t", "r", "rho", "u", "r_mass", "r_momentum"};
    if (cfg.h_fd > 0.0) cols.push_back("fd_discrepancy");
    w.header(cols);

    for (int j = 0; j < cfg.sample_nt; ++j) {
        double t = cfg.sample_nt == 1
                       ? cfg.sample_t_lo
                       : cfg.sample_t_lo + (t_hi - cfg.sample_t_lo) * j / (cfg.sample_nt - 1);
        for (int i = 0; i < cfg.sample_nr; ++i) {
            double r = cfg.sample_nr == 1
                           ? cfg.sample_r_lo
                           : cfg.sample_r_lo +
                                 (cfg.sample_r_hi - cfg.sample_r_lo) * i / (cfg.sample_nr - 1);
            auto [rho, u] = sol.evaluate(t, r);
            auto res = sol.residual(t, r, cfg.h_fd > 0.0 ? std::optional(cfg.h_fd)
                                                         : std::nullopt);
            std::vector<double> row = {t, r, rho, u, res.mass, res.momentum};
            if (cfg.h_fd > 0.0) row.push_back(res.fd_discrepancy);
            w.row(row);
        }
    }
    return 0;
}

int run_criteria(const RunConfig& cfg) {
    CsvWriter w(std::cout);
    w.header({"gamma", "p", "kappa_max", "delta"});
    double p = select_p(cfg.params.lambda, cfg.params.mu);
    for (double g : cfg.gamma_list) {
        w.row({g, p, kappa_bound(g, p), delta_of(g)});
    }
    return 0;
}

int run_profile_check(const RunConfig& cfg, const std::string& dir) {
    Profile prof = explicit_profile(cfg.params);

    auto file = open_artifact(dir, "profile.csv");
    CsvWriter w(file);
    csv_meta(w, cfg);
    w.header({"y", "theta", "v", "r_mass", "r_momentum"});
    double max_scns = 0, max_sce = 0;
    for (int i = 0; i < cfg.ny; ++i) {
        double y = cfg.ny == 1 ? cfg.y_lo
                               : cfg.y_lo + (cfg.y_hi - cfg.y_lo) * i / (cfg.ny - 1);
        auto res = profile_residual(prof, cfg.params, y);
        auto red = reduced_residual(prof, cfg.params, y);
        max_scns = std::max({max_scns, std::abs(res.mass), std::abs(res.momentum)});
        max_sce = std::max({max_sce, std::abs(red.first), std::abs(red.second)});
        w.row({y, prof.theta->value(y), prof.v->value(y), res.mass, res.momentum});
    }

    auto obs = lp_obstruction(prof, cfg.params, cfg.obstruction_p, cfg.obstruction_radius);
    std::cout << "profile_system_max_residual = " << format_double(max_scns) << "\n";
    std::cout << "reduced_system_max_residual = " << format_double(max_sce) << "\n";
    std::cout << "obstruction_lhs = " << format_double(obs.lhs) << "\n";
    std::cout << "obstruction_rhs = " << format_double(obs.rhs) << "\n";
    std::cout << "obstruction_violated = " << (obs.violated ? "true" : "false") << "\n";
    return 0;
}

int run_scale_check(const RunConfig& cfg, const std::string& dir) {
    InvarianceScenario scenario;
    scenario.params = cfg.params;
    scenario.opts = SolverOptions{cfg.cfl, cfg.density_floor, cfg.dt_min};
    scenario.r_min = cfg.r_min;
    scenario.r_max = cfg.r_max;
    scenario.kind = cfg.scenario;
    scenario.bump = resolve_bump(cfg);
    scenario.blowup_time = cfg.blowup_time;
    scenario.t1 = cfg.t1;
    scenario.t2 = cfg.t2;
    scenario.interp_order = cfg.interp_order;

    ScalingTransform s{cfg.kappa, cfg.params.gamma};
    auto report = invariance_check_numeric(s, scenario, cfg.levels);

    auto file = open_artifact(dir, "scale_report.csv");
    CsvWriter w(file);
    csv_meta(w, cfg);
    w.header({"level", "cells", "disc_rho_l1", "disc_u_l1", "disc_linf", "combined_l1",
              "ratio_vs_prev", "interp_error_scale", "manufactured_err"});
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
        const auto& lv = report.levels[i];
        double ratio = i == 0 ? std::nan("") : report.ratios[i - 1];
        double merr = scenario.kind == "exact-forced" ? lv.manufactured_err : std::nan("");
        w.row({static_cast<double>(i), static_cast<double>(lv.cells), lv.disc_rho_l1,
               lv.disc_u_l1, lv.disc_linf, lv.combined_l1, ratio, lv.interp_error, merr});
        std::cout << "level " << i << " cells " << lv.cells
                  << " combined_l1 " << format_double(lv.combined_l1);
        if (i > 0) std::cout << " ratio " << format_double(report.ratios[i - 1]);
        std::cout << "\n";
    }
    return 0;
}

int run_diagnose(const RunConfig& cfg, const std::string& dir) {
    CsvTable table = read_csv(cfg.input);
    auto col = [&](const std::string& name) {
        int c = table.column(name);
        if (c < 0) throw Error(ErrorCode::config_error, "input lacks column " + name);
        return c;
    };
    int ct = col("t");
    if (table.rows.size() < 2) {
        throw Error(ErrorCode::config_error, "input has fewer than two rows");
    }

    auto channel = [&](int c) {
        Channel ch;
        for (const auto& row : table.rows) ch.emplace_back(row[ct], row[c]);
        return ch;
    };
    auto meta_num = [&](const std::string& key, double fallback) {
        auto it = table.meta.find(key);
        return it == table.meta.end() ? fallback : std::strtod(it->second.c_str(), nullptr);
    };

    int pass = 0, fail = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        (ok ? pass : fail) += 1;
        std::cout << (ok ? "[pass] " : "[fail] ") << name << ": " << detail << "\n";
    };

    // mass conservation against the audited floor corrections; only closed
    // (wall/axis) boundaries conserve mass
    auto closed = [&](const std::string& key) {
        auto it = table.meta.find(key);
        return it == table.meta.end() || it->second == "wall" || it->second == "axis";
    };
    if (closed("bc_inner_resolved") && closed("bc_outer_resolved")) {
        Channel mass = channel(col("mass"));
        Channel floored = channel(col("floored_mass_acc"));
        double m0 = mass.front().second;
        double drift = 0;
        for (std::size_t i = 0; i < mass.size(); ++i) {
            drift = std::max(drift, std::abs(mass[i].second - m0) - floored[i].second);
        }
        report("mass_conservation", drift <= 1e-12 * std::abs(m0),
               "max unaudited drift " + format_double(drift) + " vs tol " +
                   format_double(1e-12 * std::abs(m0)));
    } else {
        std::cout << "[info] mass_conservation skipped: open boundaries exchange mass\n";
    }

    // balance residual: magnitude report (grid-dependent, no fixed gate)
    Channel balance = channel(col("balance_residual"));
    double max_balance = 0;
    for (auto [t, v] : balance) max_balance = std::max(max_balance, std::abs(v));
    std::cout << "[info] balance_residual_max = " << format_double(max_balance)
              << (closed("bc_inner_resolved") && closed("bc_outer_resolved")
                      ? " (compare across refinements)\n"
                      : " (includes boundary work: open boundaries)\n");

    double gamma = meta_num("gamma", 2.0);
    if (gamma == 1.0) {
        Channel slack = channel(col("bound_slack"));
        double worst = 0;
        for (auto [t, v] : slack) worst = std::min(worst, v);
        report("isothermal_bound_slack", worst >= -1e-13,
               "min slack " + format_double(worst));
    }

    // type-I indicator against the admissible-rate bound
    Channel type1 = channel(col("type1_indicator"));
    bool have_type1 = !type1.empty() && std::isfinite(type1.front().second);
    if (have_type1) {
        double mu = meta_num("mu", 1.0), lambda = meta_num("lambda", 1.0);
        double kmax = kappa_bound(gamma, select_p(lambda, mu));
        double lo = type1.front().second, hi = lo;
        for (auto [t, v] : type1) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        std::cout << "[info] type1_indicator in [" << format_double(lo) << ", "
                  << format_double(hi) << "], admissible bound " << format_double(kmax)
                  << (lo > kmax ? " (exceeded: outside the no-blowup regime)" : "") << "\n";
    }

    // blowup-rate fit on the max-density channel
    Channel max_rho = channel(col("max_rho"));
    double t0 = max_rho.front().first, tn = max_rho.back().first;
    double lo = cfg.fit_lo ? *cfg.fit_lo : t0 + 0.5 * (tn - t0);
    double hi = cfg.fit_hi ? *cfg.fit_hi : tn;
    auto fit_file = open_artifact(dir, "fit_summary.csv");
    CsvWriter fw(fit_file);
    fw.header({"kappa_hat", "t_hat", "m_hat", "r_squared", "samples", "window_lo",
               "window_hi"});
    try {
        // stride to ~64 samples so the fit sees macroscopic growth increments
        Channel strided;
        std::size_t first = 0;
        while (first < max_rho.size() && max_rho[first].first < lo) ++first;
        std::size_t count = 0;
        for (std::size_t i = first; i < max_rho.size() && max_rho[i].first <= hi; ++i) ++count;
        std::size_t stride = std::max<std::size_t>(1, count / 64);
        for (std::size_t i = first; i < max_rho.size() && max_rho[i].first <= hi; i += stride) {
            strided.push_back(max_rho[i]);
        }
        RateFit fit = density_rate_fit(strided, lo, hi);
        fw.row({fit.kappa_hat, fit.t_hat, fit.m_hat, fit.r_squared,
                static_cast<double>(fit.samples), fit.window_lo, fit.window_hi});
        std::cout << "[info] rate_fit kappa_hat = " << format_double(fit.kappa_hat)
                  << " t_hat = " << format_double(fit.t_hat)
                  << " r_squared = " << format_double(fit.r_squared) << "\n";
    } catch (const Error& e) {
        std::cout << "[info] rate_fit skipped: " << e.what() << "\n";
    }

    // companion plotting script
    auto plot = open_artifact(dir, "plot_diagnostics.py");
    plot << "#!/usr/bin/env python3\n"
            "\"\"\"Plot the channels of a diagnostics CSV produced by cnslab.\"\"\"\n"
            "import csv, sys\n"
            "import matplotlib.pyplot as plt\n\n"
            "path = sys.argv[1] if len(sys.argv) > 1 else "
         << "\"" << cfg.input << "\"\n"
         << "rows = [r for r in csv.reader(open(path)) if r and not r[0].startswith('#')]\n"
            "names, data = rows[0], list(zip(*[[float(x or 'nan') for x in r] for r in rows[1:]]))\n"
            "cols = dict(zip(names, data))\n"
            "t = cols.pop('t')\n"
            "fig, axes = plt.subplots(4, 4, figsize=(16, 12), sharex=True)\n"
            "for ax, (name, vals) in zip(axes.flat, sorted(cols.items())):\n"
            "    ax.plot(t, vals)\n"
            "    ax.set_title(name)\n"
            "    ax.set_xlabel('t')\n"
            "fig.tight_layout()\n"
            "fig.savefig('diagnostics.png', dpi=150)\n"
            "print('wrote diagnostics.png')\n";

    std::cout << pass << " passed, " << fail << " failed\n";
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    auto started = std::chrono::steady_clock::now();
    try {
        validate(config);
        std::string dir = resolve_out_dir(config);
        if (config.subcommand != "criteria") {
            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) throw Error(ErrorCode::config_error, "cannot create " + dir);
        }
        double wall = 0;
        int code = 0;
        if (config.subcommand == "simulate") {
            return run_simulate(config, dir, wall, started);
        } else if (config.subcommand == "exact") {
            code = run_exact(config, dir);
        } else if (config.subcommand == "criteria") {
            return run_criteria(config);
        } else if (config.subcommand == "profile-check") {
            code = run_profile_check(config, dir);
        } else if (config.subcommand == "scale-check") {
            code = run_scale_check(config, dir);
        } else if (config.subcommand == "diagnose") {
            code = run_diagnose(config, dir);
        } else {
            throw Error(ErrorCode::config_error,
                        "unknown subcommand: " + config.subcommand);
        }
        wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_manifest(config, dir, "completed", wall);
        return code;
    } catch (const Error& e) {
        std::cerr << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace cnslab
