// Acceptance suite: runs every top-level verification target at its stated
// tolerance and prints one pass/fail line per criterion.  Exits nonzero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cnslab/diagnostics.hpp"
#include "cnslab/elliptic_flux.hpp"
#include "cnslab/exact_solution.hpp"
#include "cnslab/params.hpp"
#include "cnslab/profile.hpp"
#include "cnslab/scaling.hpp"
#include "cnslab/solver.hpp"

using namespace cnslab;

namespace {

struct Criterion {
    std::string name;
    std::function<std::string()> body;  // returns detail, throws on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

double rel_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// --- criterion 1: explicit-solution residual --------------------------------

std::string c1_exact_residual() {
    double worst = 0.0;
    long points = 0;
    for (int n : {2, 3}) {
        for (double gamma : {1.5, 2.0, 3.0}) {
            for (double A : {0.5, 1.0}) {
                for (auto [mu, lambda] : {std::pair{1.0, 1.0}, std::pair{0.7, -0.4}}) {
                    ExactBlowup sol({gamma, A, mu, lambda, n}, 1.0);
                    for (int it = 0; it < 20; ++it) {
                        double t = 0.9 * it / 19.0;
                        for (int ir = 0; ir < 50; ++ir) {
                            double r = 0.05 + (2.0 - 0.05) * ir / 49.0;
                            auto res = sol.residual(t, r);
                            worst = std::max({worst, std::abs(res.mass),
                                              std::abs(res.momentum)});
                            ++points;
                        }
                    }
                }
            }
        }
    }
    require(worst <= 1e-10, "max residual " + fmt(worst) + " > 1e-10");
    return "max residual " + fmt(worst) + " over " + std::to_string(points) + " points";
}

// --- criterion 2: constants table --------------------------------------------

std::string c2_constants() {
    double c3 = blowup_constant({2, 1, 1, 1, 3});
    double c2 = blowup_constant({2, 1, 1, 1, 2});
    double beta = beta_of({2, 1, 1, 1, 3});
    require(std::abs(c3 - 0.06) <= 1e-14, "C_3(2,1) = " + fmt(c3));
    require(std::abs(c2 - 0.0625) <= 1e-14, "C_2(2,1) = " + fmt(c2));
    require(std::abs(beta + 0.4) <= 1e-14, "beta(3,2) = " + fmt(beta));
    return "C_3 = 0.06, C_2 = 0.0625, beta = -0.4 within 1e-14";
}

// --- criterion 3: scaling self-similarity ------------------------------------

std::string c3_self_similarity() {
    double worst_family = 0.0, worst_group = 0.0;
    for (double kappa : {0.25, 2.0, 10.0}) {
        FluidParams params{2, 1, 1, 1, 3};
        ExactBlowup sol(params, 1.0);
        ExactBlowup rescaled(params, 1.0 / kappa);
        RadialSolution base{
            [&sol](double t, double r) { return sol.density(t, r); },
            [&sol](double t, double r) { return sol.velocity(t, r); }};
        auto mapped = transform_closed_form({kappa, 2.0}, base);
        for (int it = 0; it < 8; ++it) {
            double t = 0.85 / kappa * it / 7.0;
            for (int ir = 0; ir < 16; ++ir) {
                double r = 0.1 + 1.9 * ir / 15.0;
                worst_family = std::max(
                    {worst_family, rel_gap(mapped.rho(t, r), rescaled.density(t, r)),
                     rel_gap(mapped.u(t, r), rescaled.velocity(t, r))});
            }
        }
        // group and inverse laws on points and closed forms
        for (double gamma : {1.0, 1.5, 2.0, 3.0}) {
            ScalingTransform a{kappa, gamma}, b{3.1, gamma};
            ScalingTransform ab{kappa * 3.1, gamma}, inv{1.0 / kappa, gamma};
            for (double t : {0.07, 0.8}) {
                for (double r : {0.3, 1.7}) {
                    auto [t1, r1] = transform_point(b, t, r);
                    auto [t2, r2] = transform_point(a, t1, r1);
                    auto [tc, rc] = transform_point(ab, t, r);
                    worst_group = std::max({worst_group, rel_gap(t2, tc), rel_gap(r2, rc)});
                    auto [tf, rf] = transform_point(a, t, r);
                    auto [tb, rb] = transform_point(inv, tf, rf);
                    worst_group = std::max({worst_group, rel_gap(tb, t), rel_gap(rb, r)});
                }
            }
        }
    }
    require(worst_family <= 1e-13, "family gap " + fmt(worst_family) + " > 1e-13");
    require(worst_group <= 1e-14, "group/inverse gap " + fmt(worst_group) + " > 1e-14");
    return "family gap " + fmt(worst_family) + ", group/inverse gap " + fmt(worst_group);
}

// --- criterion 4: numeric scaling invariance ----------------------------------

std::string c4_numeric_invariance() {
    ScalingTransform s{2.0, 2.0};
    InvarianceScenario scenario;
    scenario.params = {2, 1, 0.05, 0.05, 3};
    scenario.opts = {0.4, 1e-10, 1e-12};
    scenario.kind = "gaussian-bump";
    scenario.bump = {1.0, 0.5, 0.5, 0.1};
    scenario.t1 = 0.05;
    scenario.t2 = 0.25;
    auto report = invariance_check_numeric(s, scenario, {200, 400, 800});

    std::ostringstream detail;
    bool saturated = false;
    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        const auto& fine = report.levels[i];
        double ratio = report.ratios[i - 1];
        // the discretization is exactly scale-equivariant, so the discrepancy
        // normally saturates at round-off; accept either a first-order shrink
        // or a discrepancy at the round-off floor
        bool floor_hit = fine.combined_l1 <= 1e-12 * fine.ref_l1;
        saturated = saturated || floor_hit;
        require(ratio >= 1.8 || floor_hit,
                "level " + std::to_string(i) + ": ratio " + fmt(ratio) +
                    " < 1.8 and discrepancy " + fmt(fine.combined_l1) +
                    " above the round-off floor");
    }
    detail << "discrepancies";
    for (const auto& lv : report.levels) detail << " " << fmt(lv.combined_l1);
    if (saturated) detail << " (round-off floor: exact discrete equivariance)";
    return detail.str();
}

// --- criterion 5: manufactured-solution convergence ---------------------------

std::string c5_manufactured_convergence() {
    FluidParams params{2, 1, 1e-3, 0.0, 3};
    ExactBlowup sol(params, 1.0);
    SolverOptions opts{0.4, 1e-10, 1e-12};
    BoundaryCondition bc{BcKind::exact_forced, BcKind::exact_forced, sol};
    std::vector<double> errs;
    for (int cells : {32, 64, 128, 256}) {
        RadialGrid grid{0.2, 1.0, cells};
        auto traj = simulate(exact_state(sol, grid, 0.0), grid, params, bc, opts, 0.5);
        const State& end = traj.snapshots.back();
        double err = 0.0;
        for (int i = 0; i < grid.cells; ++i) {
            double vol = sphere_area(3) * grid.cell_volume(i, 3);
            err += std::abs(end.rho[i] - sol.density(0.5, grid.center(i))) * vol;
            err += std::abs(end.u[i] - sol.velocity(0.5, grid.center(i))) * vol;
        }
        errs.push_back(err);
    }
    std::ostringstream detail;
    detail << "L1 errors";
    for (double e : errs) detail << " " << fmt(e);
    detail << ", factors";
    for (std::size_t i = 1; i < errs.size(); ++i) {
        double ratio = errs[i - 1] / errs[i];
        detail << " " << fmt(ratio);
        require(ratio >= 1.8, "refinement factor " + fmt(ratio) + " < 1.8");
    }
    return detail.str();
}

// --- criterion 6: conservation and energy -------------------------------------

std::string c6_conservation_energy() {
    // mass conservation on a wall-bounded smooth run
    FluidParams params{2, 1, 0.05, 0.05, 3};
    BoundaryCondition bc{BcKind::axis, BcKind::wall, std::nullopt};
    SolverOptions opts{0.4, 1e-10, 1e-12};
    GaussianBump bump{1.0, 0.5, 0.5, 0.1};

    DiagnosticsOptions diag;
    diag.enabled = true;
    RadialGrid grid{0.0, 1.0, 100};
    auto traj = simulate(gaussian_bump_state(grid, bump), grid, params, bc, opts, 0.25,
                         {}, diag);
    const Channel& mass = traj.series.at("mass");
    double m0 = mass.front().second;
    double drift = 0.0;
    for (auto [t, m] : mass) drift = std::max(drift, std::abs(m - m0));
    require(drift <= traj.floored_mass_total + 1e-12 * m0,
            "mass drift " + fmt(drift) + " beyond audited floor + 1e-12 rel");

    // energy balance residual shrinks under refinement
    auto balance_at = [&](int cells) {
        RadialGrid g{0.0, 1.0, cells};
        auto tr = simulate(gaussian_bump_state(g, bump), g, params, bc, opts, 0.2, {}, diag);
        double worst = 0.0;
        for (auto [t, v] : energy_balance(tr.series, params)) {
            worst = std::max(worst, std::abs(v));
        }
        return worst;
    };
    double b1 = balance_at(100);
    double b2 = balance_at(200);
    require(b1 / b2 >= 1.8, "balance residual factor " + fmt(b1 / b2) + " < 1.8");

    // isothermal bound slack stays nonnegative at every step
    FluidParams iso{1, 1, 0.05, 0.05, 3};
    RadialGrid g1{0.0, 1.0, 80};
    auto tr1 = simulate(gaussian_bump_state(g1, bump), g1, iso, bc, opts, 0.2, {}, diag);
    double min_slack = 0.0;
    for (auto [t, v] : isothermal_balance(tr1.series, iso).slack) {
        min_slack = std::min(min_slack, v);
    }
    require(min_slack >= -1e-13, "isothermal bound slack " + fmt(min_slack) + " < 0");

    return "drift " + fmt(drift) + ", balance factor " + fmt(b1 / b2) + ", min slack " +
           fmt(min_slack);
}

// --- criterion 7: threshold constants and the type-I indicator ----------------

std::string c7_thresholds() {
    require(std::abs(kappa_bound(2, 4) - 1.0 / 6.0) <= 1e-12, "kappa_bound(2,4)");
    require(std::abs(kappa_bound(1, 4) - 1.0 / 5.0) <= 1e-12, "kappa_bound(1,4)");
    require(std::abs(delta_of(1) - 3.0 / 5.0) <= 1e-12, "delta_of(1)");
    require(std::abs(delta_of(2) - 5.0 / 7.0) <= 1e-12, "delta_of(2)");
    require(std::abs(select_p(1, 1) - 4.0) <= 1e-12, "select_p(1,1)");
    double f2 = 4.0 * 1.0 - (1.0 + 1.0) * 4.0 + 4.0 * 1.0 * 2.0;
    require(std::abs(f2 - 4.0) <= 1e-12, "f(2) at lambda = mu = 1");

    // indicator of the blowup solution on a resolved grid
    FluidParams params{2, 1, 1, 1, 3};
    ExactBlowup sol(params, 1.0);
    RadialGrid grid{0.2, 1.0, 400};
    std::vector<State> snaps;
    for (double t : {0.1, 0.25, 0.4, 0.55, 0.7}) snaps.push_back(exact_state(sol, grid, t));
    double lo = 1e300, hi = 0.0;
    for (auto [t, v] : type1_indicator(snaps, grid, 3, 1.0)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double target = sol.divu_rate();  // 2n/(n(gamma-1)+2) = 1.2
    require(std::abs(target - 1.2) <= 1e-12, "divu_rate(3, 2)");
    require(std::abs(lo - target) <= 0.01 * target && std::abs(hi - target) <= 0.01 * target,
            "indicator range [" + fmt(lo) + ", " + fmt(hi) + "] off 1.2 by more than 1%");
    require(lo > kappa_bound(2, 4), "indicator does not exceed kappa_max");
    return "thresholds exact; indicator in [" + fmt(lo) + ", " + fmt(hi) +
           "] vs 1.2, above kappa_max = " + fmt(kappa_bound(2, 4));
}

// --- criterion 8: blowup-rate fit ----------------------------------------------

std::string c8_rate_fit() {
    // planted channel
    Channel planted;
    for (int i = 0; i < 32; ++i) {
        double t = 0.9 * i / 31.0;
        planted.emplace_back(t, 2.0 / std::sqrt(1.0 - t));
    }
    RateFit fit = density_rate_fit(planted, 0.0, 0.9);
    require(std::abs(fit.kappa_hat - 0.5) <= 0.02 * 0.5,
            "planted kappa " + fmt(fit.kappa_hat));
    require(std::abs(fit.t_hat - 1.0) <= 0.02, "planted T " + fmt(fit.t_hat));

    // rate recovered from an exact-forced truncated-ball run (kappa = 2/(gamma-1) = 2)
    FluidParams params{2, 1, 1e-3, 0.0, 3};
    ExactBlowup sol(params, 1.0);
    BoundaryCondition bc{BcKind::exact_forced, BcKind::exact_forced, sol};
    RadialGrid grid{0.2, 1.0, 200};
    Channel max_rho;
    DiagnosticsOptions diag;
    diag.enabled = true;
    diag.keep_in_memory = false;
    diag.row_sink = [&](const DiagRow& row) { max_rho.emplace_back(row.t, row.max_rho); };
    simulate(exact_state(sol, grid, 0.0), grid, params, bc, {0.4, 1e-10, 1e-12}, 0.85,
             {}, diag);
    Channel strided;
    for (std::size_t i = 0; i < max_rho.size(); i += std::max<std::size_t>(1, max_rho.size() / 512)) {
        if (max_rho[i].first >= 0.3) strided.push_back(max_rho[i]);
    }
    RateFit run_fit = density_rate_fit(strided, 0.3, 0.85);
    require(std::abs(run_fit.kappa_hat - 2.0) <= 0.05 * 2.0,
            "run kappa " + fmt(run_fit.kappa_hat) + " off 2.0 by more than 5%");
    return "planted kappa " + fmt(fit.kappa_hat) + ", T " + fmt(fit.t_hat) +
           "; run kappa " + fmt(run_fit.kappa_hat);
}

// --- criterion 9: effective viscous flux ----------------------------------------

std::string c9_elliptic_flux() {
    // closed-form case: pressure r^2, lambda + 2 mu = 3, v = (r^3 - r)/15
    FluidParams params{2, 1, 1, 1, 3};
    RadialGrid grid{0.0, 1.0, 20000};
    std::vector<double> rho(grid.cells);
    for (int i = 0; i < grid.cells; ++i) rho[i] = grid.center(i);
    auto field = solve_lame_radial(rho, grid, params, LameBc::bounded);
    double worst_v = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        double r = grid.center(i);
        worst_v = std::max(worst_v, std::abs(field.v[i] - (r * r * r - r) / 15.0));
    }
    require(worst_v <= 1e-8, "closed-form v gap " + fmt(worst_v) + " > 1e-8");

    // discrete operator consistency at second order
    auto residual_at = [&](int cells) {
        RadialGrid g{0.0, 1.0, cells};
        std::vector<double> rr(g.cells), pressure(g.cells);
        for (int i = 0; i < g.cells; ++i) {
            double r = g.center(i);
            rr[i] = 1.0 + 0.5 * std::exp(-20.0 * (r - 0.5) * (r - 0.5));
            pressure[i] = rr[i] * rr[i];
        }
        auto f = solve_lame_radial(rr, g, params, LameBc::bounded);
        auto lhs = apply_lame_radial(f.v, g, params);
        // fixed interior band: the centered stencils degrade where r ~ h
        double worst = 0.0;
        for (int i = 2; i < g.cells - 2; ++i) {
            double r = g.center(i);
            if (r < 0.05 || r > 0.95) continue;
            double grad_p = (pressure[i + 1] - pressure[i - 1]) / (2.0 * g.spacing());
            worst = std::max(worst, std::abs(lhs[i] - grad_p));
        }
        return worst;
    };
    double r1 = residual_at(100), r2 = residual_at(200);
    require(r1 / r2 >= 3.2, "operator residual factor " + fmt(r1 / r2) + " below O(h^2)");

    // gradient norm closed form
    RadialGrid g2{0.0, 1.0, 500};
    std::vector<double> omega(g2.cells);
    for (int i = 0; i < g2.cells; ++i) omega[i] = g2.center(i);
    double norm = grad_omega_l2(omega, g2, 3);
    require(std::abs(norm - 2.0 * std::sqrt(M_PI)) <= 1e-6,
            "grad norm " + fmt(norm) + " vs 2 sqrt(pi)");

    return "v gap " + fmt(worst_v) + ", operator factor " + fmt(r1 / r2) +
           ", grad norm gap " + fmt(std::abs(norm - 2.0 * std::sqrt(M_PI)));
}

// --- criterion 10: profile system ------------------------------------------------

std::string c10_profile() {
    double worst_res = 0.0, worst_rec = 0.0;
    for (double gamma : {1.5, 2.0, 3.0}) {
        for (int n : {2, 3}) {
            FluidParams params{gamma, 1, 1, 1, n};
            Profile p = explicit_profile(params);
            ExactBlowup sol(params, 1.0);
            for (double y : {0.05, 0.3, 1.0, 3.0}) {
                auto res = profile_residual(p, params, y);
                auto red = reduced_residual(p, params, y);
                worst_res = std::max({worst_res, std::abs(res.mass), std::abs(res.momentum),
                                      std::abs(red.first), std::abs(red.second)});
            }
            for (double t : {0.0, 0.5, 0.9}) {
                for (double r : {0.1, 0.9, 1.8}) {
                    auto [rho, u] = reconstruct(p, params, 1.0, t, r);
                    worst_rec = std::max({worst_rec, rel_gap(rho, sol.density(t, r)),
                                          rel_gap(u, sol.velocity(t, r))});
                }
            }
        }
    }
    require(worst_res <= 1e-10, "profile residual " + fmt(worst_res) + " > 1e-10");
    require(worst_rec <= 1e-13, "reconstruction gap " + fmt(worst_rec) + " > 1e-13");

    FluidParams params{2, 1, 1, 1, 3};
    auto obs = lp_obstruction(explicit_profile(params), params,
                              3.0 * (params.gamma + 1.0) / 2.0, 1.0);
    require(obs.lhs == 0.0 && !obs.violated, "obstruction prefactor did not vanish");
    return "residuals " + fmt(worst_res) + ", reconstruction " + fmt(worst_rec) +
           ", obstruction lhs 0 at p = 3(gamma+1)/2";
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"01 explicit-solution residual", c1_exact_residual},
        {"02 constants table", c2_constants},
        {"03 scaling self-similarity", c3_self_similarity},
        {"04 numeric scaling invariance", c4_numeric_invariance},
        {"05 manufactured-solution convergence", c5_manufactured_convergence},
        {"06 conservation and energy", c6_conservation_energy},
        {"07 threshold constants and type-I indicator", c7_thresholds},
        {"08 blowup-rate fit", c8_rate_fit},
        {"09 effective viscous flux", c9_elliptic_flux},
        {"10 profile system", c10_profile},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.body();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char line[512];
        std::snprintf(line, sizeof(line), "[%s] criterion %s (%.2fs): %s",
                      ok ? "pass" : "FAIL", c.name.c_str(), secs, detail.c_str());
        std::cout << line << std::endl;
        if (!ok) ++failures;
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria passed" << std::endl;
    return 0;
}
