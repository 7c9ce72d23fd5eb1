#include "cnslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cnslab {

namespace {

double sound_speed(double rho, const FluidParams& params) {
    return std::sqrt(params.A * params.gamma * std::pow(rho, params.gamma - 1.0));
}

void check_bc(const RadialGrid& grid, const BoundaryCondition& bc) {
    if ((bc.inner == BcKind::exact_forced || bc.outer == BcKind::exact_forced) && !bc.forcing) {
        throw Error(ErrorCode::config_error, "exact-forced boundary without an attached solution");
    }
    if (grid.r_min == 0.0 && bc.inner != BcKind::axis) {
        throw Error(ErrorCode::config_error, "a full ball (r_min = 0) needs the axis boundary");
    }
    if (bc.inner != BcKind::axis && grid.r_min < 0.5 * grid.spacing()) {
        throw Error(ErrorCode::config_error,
                    "inner ghost cell would cross the origin; use the axis boundary");
    }
    if (bc.outer == BcKind::axis) {
        throw Error(ErrorCode::config_error, "axis boundary is only valid at r_min = 0");
    }
}

// ghost values at the extended index 0 and cells+1
void fill_ghosts(const State& state, const RadialGrid& grid, const BoundaryCondition& bc,
                 double t_ghost, std::vector<double>& rho_e, std::vector<double>& u_e) {
    int n_cells = grid.cells;
    rho_e.resize(n_cells + 2);
    u_e.resize(n_cells + 2);
    std::copy(state.rho.begin(), state.rho.end(), rho_e.begin() + 1);
    std::copy(state.u.begin(), state.u.end(), u_e.begin() + 1);

    auto set_side = [&](BcKind kind, int ghost, int adj, double r_ghost) {
        switch (kind) {
            case BcKind::wall:
            case BcKind::axis:
                rho_e[ghost] = rho_e[adj];
                u_e[ghost] = -u_e[adj];
                break;
            case BcKind::outflow:
                rho_e[ghost] = rho_e[adj];
                u_e[ghost] = u_e[adj];
                break;
            case BcKind::exact_forced:
                rho_e[ghost] = bc.forcing->density(t_ghost, std::abs(r_ghost));
                u_e[ghost] = bc.forcing->velocity(t_ghost, r_ghost);
                break;
        }
    };
    double h = grid.spacing();
    set_side(bc.inner, 0, 1, grid.r_min - 0.5 * h);
    set_side(bc.outer, n_cells + 1, n_cells, grid.r_max + 0.5 * h);
}

struct FaceFluxes {
    std::vector<double> mass;   // rho u with Rusanov dissipation
    std::vector<double> advect; // u^2/2 with Rusanov dissipation
    std::vector<double> divu;   // r^{1-n} (r^{n-1} u)_r at faces (viscous flux)
};

void compute_face_fluxes(const std::vector<double>& rho_e, const std::vector<double>& u_e,
                         const RadialGrid& grid, const FluidParams& params,
                         const BoundaryCondition& bc, FaceFluxes& fl) {
    int n_cells = grid.cells;
    int n = params.n;
    double h = grid.spacing();
    fl.mass.resize(n_cells + 1);
    fl.advect.resize(n_cells + 1);
    fl.divu.resize(n_cells + 1);

    for (int f = 0; f <= n_cells; ++f) {
        double rho_l = rho_e[f], rho_r = rho_e[f + 1];
        double u_l = u_e[f], u_r = u_e[f + 1];
        double s = std::max(std::abs(u_l) + sound_speed(rho_l, params),
                            std::abs(u_r) + sound_speed(rho_r, params));
        fl.mass[f] = 0.5 * (rho_l * u_l + rho_r * u_r) - 0.5 * s * (rho_r - rho_l);
        fl.advect[f] = 0.25 * (u_l * u_l + u_r * u_r) - 0.5 * s * (u_r - u_l);

        double r_face = grid.face(f);
        double rc_l = grid.r_min + (f - 0.5) * h;  // ghost-aware cell centers
        double rc_r = grid.r_min + (f + 0.5) * h;
        fl.divu[f] = (std::pow(rc_r, n - 1) * u_r - std::pow(rc_l, n - 1) * u_l) /
                     (h * std::pow(r_face, n - 1));
    }

    // closed boundaries carry no convective flux; the viscous face value is
    // one-sided against u = 0 on the wall, and the r -> 0 limit n u'(0) on the axis
    auto close_face = [&](int f, BcKind kind, int adj_ext) {
        fl.mass[f] = 0.0;
        fl.advect[f] = 0.0;
        double r_face = grid.face(f);
        double rc = grid.r_min + (adj_ext - 0.5) * h;
        if (kind == BcKind::axis) {
            fl.divu[f] = n * u_e[adj_ext] / rc;
        } else {
            double num = std::pow(r_face, n - 1) * 0.0 - std::pow(rc, n - 1) * u_e[adj_ext];
            double sign = (f == 0) ? -1.0 : 1.0;
            fl.divu[f] = sign * num / (0.5 * h * std::pow(r_face, n - 1));
        }
    };
    if (bc.inner == BcKind::wall || bc.inner == BcKind::axis) close_face(0, bc.inner, 1);
    if (bc.outer == BcKind::wall) close_face(n_cells, bc.outer, n_cells);
}

void assemble(const std::vector<double>& rho_e, const FaceFluxes& fl,
              const RadialGrid& grid, const FluidParams& params, Derivatives& out) {
    int n_cells = grid.cells;
    int n = params.n;
    double h = grid.spacing();
    double visc = params.lambda + 2.0 * params.mu;
    out.drho.resize(n_cells);
    out.du.resize(n_cells);

    for (int i = 0; i < n_cells; ++i) {
        double a_lo = std::pow(grid.face(i), n - 1);
        double a_hi = std::pow(grid.face(i + 1), n - 1);
        double vol = grid.cell_volume(i, n);
        out.drho[i] = -(a_hi * fl.mass[i + 1] - a_lo * fl.mass[i]) / vol;

        double rho_i = rho_e[i + 1];
        double p_lo = params.A * std::pow(rho_e[i], params.gamma);
        double p_hi = params.A * std::pow(rho_e[i + 2], params.gamma);
        out.du[i] = -(fl.advect[i + 1] - fl.advect[i]) / h -
                    (p_hi - p_lo) / (2.0 * h * rho_i) +
                    visc * (fl.divu[i + 1] - fl.divu[i]) / (h * rho_i);
    }
}

}  // namespace

Derivatives rhs(const State& state, const RadialGrid& grid, const FluidParams& params,
                const BoundaryCondition& bc) {
    validate(params);
    check_bc(grid, bc);
    std::vector<double> rho_e, u_e;
    fill_ghosts(state, grid, bc, state.t, rho_e, u_e);
    FaceFluxes fl;
    compute_face_fluxes(rho_e, u_e, grid, params, bc, fl);
    Derivatives out;
    assemble(rho_e, fl, grid, params, out);
    return out;
}

double stable_dt(const State& state, const RadialGrid& grid, const FluidParams& params) {
    double h = grid.spacing();
    double visc = params.lambda + 2.0 * params.mu;
    double dt = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.cells; ++i) {
        double speed = std::abs(state.u[i]) + sound_speed(state.rho[i], params);
        if (speed > 0.0) dt = std::min(dt, h / speed);
        dt = std::min(dt, h * h * state.rho[i] / (2.0 * visc));
    }
    return dt;
}

Stepper::Stepper(const RadialGrid& grid, const FluidParams& params,
                 const BoundaryCondition& bc, const SolverOptions& opts)
    : grid_(grid), params_(params), bc_(bc), opts_(opts) {
    validate(params_);
    check_bc(grid_, bc_);
    if (!(opts_.cfl > 0.0 && opts_.cfl <= 1.0)) {
        throw Error(ErrorCode::config_error, "cfl must lie in (0, 1]");
    }
    stage_.rho.resize(grid.cells);
    stage_.u.resize(grid.cells);
}

void Stepper::apply_floor(State& s) {
    double added = 0.0;
    for (int i = 0; i < grid_.cells; ++i) {
        if (s.rho[i] < opts_.density_floor) {
            added += (opts_.density_floor - s.rho[i]) * grid_.cell_volume(i, params_.n);
            s.rho[i] = opts_.density_floor;
        }
    }
    floored_mass_ += sphere_area(params_.n) * added;
}

void Stepper::check_finite(const State& s) const {
    for (int i = 0; i < grid_.cells; ++i) {
        if (!std::isfinite(s.rho[i]) || !std::isfinite(s.u[i])) {
            std::ostringstream msg;
            msg << "non-finite state in cell " << i << " at t = " << s.t;
            throw BlowupError(msg.str());
        }
    }
}

void Stepper::stage(const State& in, double t_ghost, double dt, const State& base,
                    double blend, State& out) {
    fill_ghosts(in, grid_, bc_, t_ghost, rho_e_, u_e_);
    FaceFluxes fl{std::move(mass_flux_), std::move(adv_flux_), std::move(visc_face_)};
    compute_face_fluxes(rho_e_, u_e_, grid_, params_, bc_, fl);
    Derivatives d;
    assemble(rho_e_, fl, grid_, params_, d);
    mass_flux_ = std::move(fl.mass);
    adv_flux_ = std::move(fl.advect);
    visc_face_ = std::move(fl.divu);

    out.rho.resize(grid_.cells);
    out.u.resize(grid_.cells);
    for (int i = 0; i < grid_.cells; ++i) {
        out.rho[i] = blend * base.rho[i] + (1.0 - blend) * (in.rho[i] + dt * d.drho[i]);
        out.u[i] = blend * base.u[i] + (1.0 - blend) * (in.u[i] + dt * d.du[i]);
    }
}

double Stepper::step(State& state, double dt_cap) {
    double dt_stable = opts_.cfl * stable_dt(state, grid_, params_);
    if (!(dt_stable > opts_.dt_min)) {
        std::ostringstream msg;
        msg << "time step underflow at t = " << state.t << " (stable dt " << dt_stable
            << " below " << opts_.dt_min << ")";
        throw BlowupError(msg.str());
    }
    double dt = std::min(dt_stable, dt_cap);

    stage(state, state.t, dt, state, 0.0, stage_);
    stage_.t = state.t + dt;
    apply_floor(stage_);
    check_finite(stage_);

    State result;
    stage(stage_, state.t + dt, dt, state, 0.5, result);
    result.t = state.t + dt;
    apply_floor(result);
    check_finite(result);

    state.rho.swap(result.rho);
    state.u.swap(result.u);
    state.t = result.t;
    return dt;
}

// ---------------------------------------------------------------------------
// per-step diagnostics
// ---------------------------------------------------------------------------

namespace {

class Recorder {
  public:
    Recorder(const DiagnosticsOptions& opts, const RadialGrid& grid, const FluidParams& params)
        : opts_(opts), grid_(grid), params_(params), isothermal_(params.gamma == 1.0) {}

    void observe(const State& state, double floored_acc) {
        if (!opts_.enabled) return;
        Rates now = rates_of(state);
        if (!first_done_) {
            e_kin0_ = now.e_kin;
            e_pot0_ = now.e_pot;
            first_done_ = true;
        } else {
            double dt = state.t - prev_t_;
            diss_acc_ += 0.5 * dt * (prev_.diss + now.diss);
            gradu_acc_ += 0.5 * dt * (prev_.gradu_sq + now.gradu_sq);
            divu_acc_ += 0.5 * dt * (prev_.divu_sq + now.divu_sq);
            pdv_acc_ += 0.5 * dt * (prev_.pdv + now.pdv);
            bound_acc_ += 0.5 * dt * (prev_.bound + now.bound);
        }
        prev_ = now;
        prev_t_ = state.t;

        DiagRow row;
        row.t = state.t;
        row.mass = now.mass;
        row.e_kin = now.e_kin;
        row.e_pot = now.e_pot;
        row.dissipation_acc = diss_acc_;
        if (isothermal_) {
            row.balance_residual = now.e_kin - e_kin0_ + params_.mu * gradu_acc_ +
                                   (params_.lambda + params_.mu) * divu_acc_ - pdv_acc_;
            row.bound_slack = bound_acc_ - pdv_acc_ +
                              0.5 * (params_.lambda + params_.mu) * divu_acc_;
        } else {
            row.balance_residual = now.e_kin + now.e_pot + diss_acc_ - e_kin0_ - e_pot0_;
            row.bound_slack = std::nan("");
        }
        row.max_rho = now.max_rho;
        row.max_divu = now.max_divu;
        row.type1_indicator =
            opts_.t_ref ? now.max_divu * (*opts_.t_ref - state.t) : std::nan("");
        auto norms = criterion_norms(state, grid_, params_.n, opts_.q);
        row.grad_rho_lq = norms.first;
        row.grad_u_l2 = norms.second;
        row.weighted_lp = weighted_momentum_lp(state, grid_, params_.n, opts_.p);
        row.floored_mass_acc = floored_acc;
        if (opts_.effective_flux) {
            auto field = solve_lame_radial(state.rho, grid_, params_, opts_.flux_bc);
            row.grad_omega_l2 = grad_omega_l2(effective_flux(state.u, field), grid_, params_.n);
        }

        if (opts_.row_sink) opts_.row_sink(row);
        if (opts_.keep_in_memory) store(row);
    }

    DiagnosticSeries take() { return std::move(series_); }

  private:
    struct Rates {
        double mass, e_kin, e_pot, diss, gradu_sq, divu_sq, pdv, bound, max_rho, max_divu;
    };

    Rates rates_of(const State& state) const {
        Rates r;
        r.mass = total_mass(state, grid_, params_.n);
        r.e_kin = kinetic_energy(state, grid_, params_.n);
        r.e_pot = isothermal_ ? std::nan("") : potential_energy(state, grid_, params_);
        r.diss = dissipation_rate(state, grid_, params_);
        r.gradu_sq = gradu_l2_squared(state, grid_, params_.n);
        r.divu_sq = divu_l2_squared(state, grid_, params_.n);
        r.pdv = pressure_work_rate(state, grid_, params_);
        r.max_rho = max_density(state);
        r.max_divu = max_divu(state, grid_, params_.n);
        r.bound = params_.A * params_.A * r.mass * r.max_rho /
                  (2.0 * (params_.lambda + params_.mu));
        return r;
    }

    void store(const DiagRow& row) {
        series_.append("mass", row.t, row.mass);
        series_.append("e_kin", row.t, row.e_kin);
        series_.append("e_pot", row.t, row.e_pot);
        series_.append("dissipation_acc", row.t, row.dissipation_acc);
        series_.append("balance_residual", row.t, row.balance_residual);
        series_.append("max_rho", row.t, row.max_rho);
        series_.append("max_divu", row.t, row.max_divu);
        series_.append("type1_indicator", row.t, row.type1_indicator);
        series_.append("grad_rho_lq", row.t, row.grad_rho_lq);
        series_.append("grad_u_l2", row.t, row.grad_u_l2);
        series_.append("weighted_lp", row.t, row.weighted_lp);
        series_.append("floored_mass_acc", row.t, row.floored_mass_acc);
        series_.append("bound_slack", row.t, row.bound_slack);
        if (row.grad_omega_l2) series_.append("grad_omega_l2", row.t, *row.grad_omega_l2);
        // time integrals needed to re-derive the balances from the series
        series_.append("gradu_l2sq_acc", row.t, gradu_acc_);
        series_.append("divu_l2sq_acc", row.t, divu_acc_);
        series_.append("pdv_acc", row.t, pdv_acc_);
        series_.append("linf_bound_acc", row.t, bound_acc_);
    }

    DiagnosticsOptions opts_;
    RadialGrid grid_;
    FluidParams params_;
    bool isothermal_;
    DiagnosticSeries series_;
    bool first_done_ = false;
    Rates prev_{};
    double prev_t_ = 0;
    double e_kin0_ = 0, e_pot0_ = 0;
    double diss_acc_ = 0, gradu_acc_ = 0, divu_acc_ = 0, pdv_acc_ = 0, bound_acc_ = 0;
};

}  // namespace

const State& Trajectory::at_time(double t) const {
    for (const auto& s : snapshots) {
        if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
    }
    throw Error(ErrorCode::out_of_domain, "no snapshot recorded at the requested time");
}

Trajectory simulate(const State& initial, const RadialGrid& grid, const FluidParams& params,
                    const BoundaryCondition& bc, const SolverOptions& opts, double t_end,
                    std::vector<double> snapshot_times, const DiagnosticsOptions& diag) {
    if (!(t_end > initial.t)) {
        throw Error(ErrorCode::config_error, "t_end must exceed the initial time");
    }
    if (bc.forcing && !(bc.forcing->blowup_time() > t_end)) {
        throw Error(ErrorCode::constraint_violation,
                    "exact forcing requires the blowup time beyond the horizon");
    }

    auto traj = std::make_shared<Trajectory>();
    State cur = initial;

    std::sort(snapshot_times.begin(), snapshot_times.end());
    std::vector<double> events;
    for (double t : snapshot_times) {
        if (t > cur.t && t < t_end) events.push_back(t);
    }
    events.push_back(t_end);
    events.erase(std::unique(events.begin(), events.end()), events.end());

    Stepper stepper(grid, params, bc, opts);
    Recorder recorder(diag, grid, params);

    traj->snapshots.push_back(cur);
    recorder.observe(cur, stepper.floored_mass());

    try {
        for (double target : events) {
            double eps = 1e-14 * std::max(1.0, std::abs(target));
            while (target - cur.t > eps) {
                stepper.step(cur, target - cur.t);
                if (target - cur.t <= eps) cur.t = target;
                recorder.observe(cur, stepper.floored_mass());
            }
            cur.t = target;
            traj->snapshots.push_back(cur);
        }
    } catch (BlowupError& err) {
        traj->blew_up = true;
        traj->stop_reason = err.what();
        traj->snapshots.push_back(cur);  // last healthy state
        traj->floored_mass_total = stepper.floored_mass();
        traj->series = recorder.take();
        err.attach(traj);
        throw;
    }

    traj->floored_mass_total = stepper.floored_mass();
    traj->series = recorder.take();
    traj->stop_reason = "completed";
    return std::move(*traj);
}

State rest_state(const RadialGrid& grid, double rho0) {
    State s;
    s.rho.assign(grid.cells, rho0);
    s.u.assign(grid.cells, 0.0);
    return s;
}

State gaussian_bump_state(const RadialGrid& grid, const GaussianBump& bump) {
    State s;
    s.rho.resize(grid.cells);
    s.u.assign(grid.cells, 0.0);
    for (int i = 0; i < grid.cells; ++i) {
        double d = (grid.center(i) - bump.center) / bump.width;
        s.rho[i] = bump.base + bump.amplitude * std::exp(-d * d);
    }
    return s;
}

State exact_state(const ExactBlowup& sol, const RadialGrid& grid, double t) {
    State s;
    s.rho.resize(grid.cells);
    s.u.resize(grid.cells);
    s.t = t;
    for (int i = 0; i < grid.cells; ++i) {
        s.rho[i] = sol.density(t, grid.center(i));
        s.u[i] = sol.velocity(t, grid.center(i));
    }
    return s;
}

}  // namespace cnslab
