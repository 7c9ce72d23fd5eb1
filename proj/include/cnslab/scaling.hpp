#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "cnslab/grid.hpp"
#include "cnslab/params.hpp"
#include "cnslab/solver.hpp"

namespace cnslab {

// One-parameter family mapping solutions to solutions:
//   rho^k(t, x) = k^{1/gamma}           rho(k t, k^{(gamma+1)/(2 gamma)} x)
//   u^k(t, x)   = k^{(gamma-1)/(2 gamma)} u(k t, k^{(gamma+1)/(2 gamma)} x)
struct ScalingTransform {
    double kappa = 1.0;  // > 0
    double gamma = 2.0;
};

// exponent of the spatial argument, (gamma+1)/(2 gamma)
double space_exponent(double gamma);

// arguments at which the original solution is read: (kappa t, kappa^e r)
std::pair<double, double> transform_point(const ScalingTransform& s, double t, double r);

// closed-form radial solution: (t, r) -> value, u being the radial component
struct RadialSolution {
    std::function<double(double, double)> rho;
    std::function<double(double, double)> u;
};

RadialSolution transform_closed_form(const ScalingTransform& s, const RadialSolution& sol);

// grid on which a transformed snapshot naturally lives: radii divided by kappa^e
RadialGrid scaled_grid(const ScalingTransform& s, const RadialGrid& grid);

// Transformed discrete fields at time src.t / kappa, read from the source
// snapshot by Lagrange interpolation of the given order onto the target grid.
// Throws OutOfDomain when a required sample point leaves the source domain.
State transform_snapshot(const ScalingTransform& s, const State& src,
                         const RadialGrid& src_grid, const RadialGrid& dst_grid,
                         int interp_order = 3);

// size of the interpolation error committed by transform_snapshot: the target
// spacing raised to the interpolation order
double interp_error_scale(const RadialGrid& dst_grid, int interp_order);

// --- rescaled re-simulation check ----------------------------------------------

struct InvarianceScenario {
    FluidParams params;
    SolverOptions opts;
    double r_min = 0.0;
    double r_max = 1.0;
    std::string kind = "gaussian-bump";  // or "exact-forced"
    GaussianBump bump;
    double blowup_time = 1.0;  // exact-forced only
    double t1 = 0.05;          // snapshot to transform (0 < t1 < t2)
    double t2 = 0.25;          // comparison time
    int interp_order = 3;
};

struct InvarianceLevel {
    int cells = 0;
    double disc_rho_l1 = 0;   // L1 gap between the rescaled re-simulation and
    double disc_u_l1 = 0;     // the transformed reference snapshot
    double disc_linf = 0;
    double combined_l1 = 0;
    double ref_l1 = 0;        // L1 size of the reference fields (scale for floors)
    double interp_error = 0;  // interp_error_scale of the target grid
    double manufactured_err = 0;  // exact-forced only: max of the two runs' own L1 errors
};

struct InvarianceReport {
    std::vector<InvarianceLevel> levels;
    std::vector<double> ratios;  // combined_l1 shrink factors between levels
};

// For each cell count: run the scenario to t2, transform the t1 snapshot into
// initial data, re-run to t2/kappa, and compare with the transformed t2
// snapshot.  Discrepancies must shrink at the scheme order under refinement;
// a fixed tolerance would be grid-dependent, so only norms are returned.
InvarianceReport invariance_check_numeric(const ScalingTransform& s,
                                          const InvarianceScenario& scenario,
                                          const std::vector<int>& cell_counts);

}  // namespace cnslab
