#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cnslab/diagnostics.hpp"
#include "cnslab/errors.hpp"
#include "cnslab/exact_solution.hpp"
#include "cnslab/grid.hpp"
#include "cnslab/params.hpp"

namespace cnslab {

// Finite-volume solver for the radially reduced system
//   rho_t + r^{1-n} (r^{n-1} rho u)_r = 0
//   rho (u_t + u u_r) + (A rho^gamma)_r = (lambda + 2 mu) (r^{1-n} (r^{n-1} u)_r)_r
// Convection uses a local Lax-Friedrichs (Rusanov) flux with signal speed
// |u| + c, c = sqrt(A gamma rho^{gamma-1}); pressure gradient and viscous term
// are central.  Formally first order in space, two-stage second order in time.

enum class BcKind {
    wall,          // u = 0 at the boundary, zero mass flux
    axis,          // symmetry cell at r = 0 (u odd, rho even)
    outflow,       // zero gradient
    exact_forced,  // ghost values from an attached ExactBlowup
};

struct BoundaryCondition {
    BcKind inner = BcKind::wall;
    BcKind outer = BcKind::wall;
    std::optional<ExactBlowup> forcing;  // required when either side is exact_forced
};

struct SolverOptions {
    double cfl = 0.4;            // in (0, 1]
    double density_floor = 1e-10;
    double dt_min = 1e-12;       // stable dt below this raises BlowupDetected
};

struct Derivatives {
    std::vector<double> drho;
    std::vector<double> du;
};

struct Trajectory {
    std::vector<State> snapshots;  // includes the initial and final states
    DiagnosticSeries series;
    double floored_mass_total = 0.0;  // mass added by the density floor
    bool blew_up = false;
    std::string stop_reason;

    // snapshot closest to t (must match within a small tolerance)
    const State& at_time(double t) const;
};

// Time derivative of the discrete system; ghost values taken at state.t.
Derivatives rhs(const State& state, const RadialGrid& grid, const FluidParams& params,
                const BoundaryCondition& bc);

// cfl-free stable step: min over cells of
//   min( h / (|u| + c), h^2 rho / (2 (lambda + 2 mu)) )
double stable_dt(const State& state, const RadialGrid& grid, const FluidParams& params);

// Advances one step of at most dt_cap (exact event times are hit by capping).
// Returns the dt taken; accumulates floored mass.  Throws BlowupError on
// NaN/Inf or when cfl * stable_dt falls below dt_min.
class Stepper {
  public:
    Stepper(const RadialGrid& grid, const FluidParams& params, const BoundaryCondition& bc,
            const SolverOptions& opts);

    double step(State& state, double dt_cap);
    double floored_mass() const { return floored_mass_; }

  private:
    void stage(const State& in, double t_ghost, double dt, const State& base,
               double blend, State& out);
    void apply_floor(State& s);
    void check_finite(const State& s) const;

    RadialGrid grid_;
    FluidParams params_;
    BoundaryCondition bc_;
    SolverOptions opts_;
    double floored_mass_ = 0.0;
    // work buffers
    std::vector<double> rho_e_, u_e_, mass_flux_, adv_flux_, visc_face_;
    State stage_;
};

// Advances from state.t to t_end recording snapshots at the given times (the
// initial and final states are always included) and, when enabled, one
// diagnostics row per accepted step.  On blowup throws BlowupError carrying
// the trajectory up to the last healthy state.
Trajectory simulate(const State& initial, const RadialGrid& grid, const FluidParams& params,
                    const BoundaryCondition& bc, const SolverOptions& opts, double t_end,
                    std::vector<double> snapshot_times = {},
                    const DiagnosticsOptions& diag = {});

// --- initial data -------------------------------------------------------------

State rest_state(const RadialGrid& grid, double rho0);

struct GaussianBump {
    double base = 1.0;
    double amplitude = 0.5;
    double center = 0.5;
    double width = 0.1;
};
State gaussian_bump_state(const RadialGrid& grid, const GaussianBump& bump);

// exact solution sampled at cell centers at time t
State exact_state(const ExactBlowup& sol, const RadialGrid& grid, double t);

}  // namespace cnslab
