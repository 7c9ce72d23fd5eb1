#include "cnslab/scaling.hpp"

#include <cmath>

#include "cnslab/interpolate.hpp"

namespace cnslab {

namespace {

void check_transform(const ScalingTransform& s) {
    if (!(s.kappa > 0.0)) {
        throw Error(ErrorCode::constraint_violation, "scaling factor kappa must be positive");
    }
    if (!(s.gamma >= 1.0)) {
        throw Error(ErrorCode::constraint_violation, "gamma >= 1");
    }
}

}  // namespace

double space_exponent(double gamma) {
    return (gamma + 1.0) / (2.0 * gamma);
}

std::pair<double, double> transform_point(const ScalingTransform& s, double t, double r) {
    check_transform(s);
    return {s.kappa * t, std::pow(s.kappa, space_exponent(s.gamma)) * r};
}

RadialSolution transform_closed_form(const ScalingTransform& s, const RadialSolution& sol) {
    check_transform(s);
    double g = s.gamma;
    double a_rho = std::pow(s.kappa, 1.0 / g);
    double a_u = std::pow(s.kappa, (g - 1.0) / (2.0 * g));
    double a_x = std::pow(s.kappa, space_exponent(g));
    double k = s.kappa;
    RadialSolution out;
    out.rho = [k, a_rho, a_x, f = sol.rho](double t, double r) {
        return a_rho * f(k * t, a_x * r);
    };
    out.u = [k, a_u, a_x, f = sol.u](double t, double r) {
        return a_u * f(k * t, a_x * r);
    };
    return out;
}

RadialGrid scaled_grid(const ScalingTransform& s, const RadialGrid& grid) {
    check_transform(s);
    double shrink = std::pow(s.kappa, -space_exponent(s.gamma));
    return {grid.r_min * shrink, grid.r_max * shrink, grid.cells};
}

State transform_snapshot(const ScalingTransform& s, const State& src,
                         const RadialGrid& src_grid, const RadialGrid& dst_grid,
                         int interp_order) {
    check_transform(s);
    double g = s.gamma;
    double a_rho = std::pow(s.kappa, 1.0 / g);
    double a_u = std::pow(s.kappa, (g - 1.0) / (2.0 * g));
    double a_x = std::pow(s.kappa, space_exponent(g));

    RadialInterpolant rho_itp(src.rho, src_grid, interp_order);
    RadialInterpolant u_itp(src.u, src_grid, interp_order);

    State out;
    out.rho.resize(dst_grid.cells);
    out.u.resize(dst_grid.cells);
    out.t = src.t / s.kappa;
    for (int i = 0; i < dst_grid.cells; ++i) {
        double q = a_x * dst_grid.center(i);
        out.rho[i] = a_rho * rho_itp.value(q);
        out.u[i] = a_u * u_itp.value(q);
    }
    return out;
}

double interp_error_scale(const RadialGrid& dst_grid, int interp_order) {
    return std::pow(dst_grid.spacing(), interp_order);
}

// ---------------------------------------------------------------------------
// rescaled re-simulation
// ---------------------------------------------------------------------------

namespace {

struct NormPair {
    double rho_l1 = 0, u_l1 = 0, linf = 0;
};

NormPair field_gap(const State& a, const State& b, const RadialGrid& grid, int n) {
    NormPair out;
    for (int i = 0; i < grid.cells; ++i) {
        double dr = std::abs(a.rho[i] - b.rho[i]);
        double du = std::abs(a.u[i] - b.u[i]);
        double vol = sphere_area(n) * grid.cell_volume(i, n);
        out.rho_l1 += dr * vol;
        out.u_l1 += du * vol;
        out.linf = std::max({out.linf, dr, du});
    }
    return out;
}

BcKind auto_inner(double r_min) { return r_min == 0.0 ? BcKind::axis : BcKind::wall; }

}  // namespace

InvarianceReport invariance_check_numeric(const ScalingTransform& s,
                                          const InvarianceScenario& scenario,
                                          const std::vector<int>& cell_counts) {
    check_transform(s);
    if (!(scenario.t2 > scenario.t1 && scenario.t1 > 0.0)) {
        throw Error(ErrorCode::config_error, "invariance check needs t2 > t1 > 0");
    }
    bool forced = scenario.kind == "exact-forced";
    if (!forced && scenario.kind != "gaussian-bump") {
        throw Error(ErrorCode::config_error,
                    "invariance scenario must be gaussian-bump or exact-forced");
    }

    InvarianceReport report;
    for (int cells : cell_counts) {
        RadialGrid grid_a{scenario.r_min, scenario.r_max, cells};

        BoundaryCondition bc_a;
        State init_a;
        if (forced) {
            bc_a.inner = BcKind::exact_forced;
            bc_a.outer = BcKind::exact_forced;
            bc_a.forcing = ExactBlowup(scenario.params, scenario.blowup_time);
            init_a = exact_state(*bc_a.forcing, grid_a, 0.0);
        } else {
            bc_a.inner = auto_inner(grid_a.r_min);
            bc_a.outer = BcKind::wall;
            init_a = gaussian_bump_state(grid_a, scenario.bump);
        }

        auto traj_a = simulate(init_a, grid_a, scenario.params, bc_a, scenario.opts,
                               scenario.t2, {scenario.t1});
        const State& snap1 = traj_a.at_time(scenario.t1);
        const State& snap2 = traj_a.at_time(scenario.t2);

        RadialGrid grid_b = scaled_grid(s, grid_a);
        State init_b = transform_snapshot(s, snap1, grid_a, grid_b, scenario.interp_order);

        BoundaryCondition bc_b = bc_a;
        if (forced) {
            // the transformed solution is the same family with blowup time T/kappa
            bc_b.forcing = ExactBlowup(scenario.params, scenario.blowup_time / s.kappa);
        }

        auto traj_b = simulate(init_b, grid_b, scenario.params, bc_b, scenario.opts,
                               scenario.t2 / s.kappa);
        const State& end_b = traj_b.snapshots.back();
        State reference = transform_snapshot(s, snap2, grid_a, grid_b, scenario.interp_order);

        NormPair gap = field_gap(end_b, reference, grid_b, scenario.params.n);
        InvarianceLevel level;
        level.cells = cells;
        level.disc_rho_l1 = gap.rho_l1;
        level.disc_u_l1 = gap.u_l1;
        level.disc_linf = gap.linf;
        level.combined_l1 = gap.rho_l1 + gap.u_l1;
        State zero;
        zero.rho.assign(grid_b.cells, 0.0);
        zero.u.assign(grid_b.cells, 0.0);
        NormPair size = field_gap(reference, zero, grid_b, scenario.params.n);
        level.ref_l1 = size.rho_l1 + size.u_l1;
        level.interp_error = interp_error_scale(grid_b, scenario.interp_order);

        if (forced) {
            State exact_a = exact_state(*bc_a.forcing, grid_a, scenario.t2);
            State exact_b = exact_state(*bc_b.forcing, grid_b, scenario.t2 / s.kappa);
            NormPair err_a = field_gap(snap2, exact_a, grid_a, scenario.params.n);
            NormPair err_b = field_gap(end_b, exact_b, grid_b, scenario.params.n);
            level.manufactured_err =
                std::max(err_a.rho_l1 + err_a.u_l1, err_b.rho_l1 + err_b.u_l1);
        }
        report.levels.push_back(level);
    }

    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        report.ratios.push_back(report.levels[i - 1].combined_l1 /
                                report.levels[i].combined_l1);
    }
    return report;
}

}  // namespace cnslab
