#include "cnslab/elliptic_flux.hpp"

#include <cmath>

namespace cnslab {

namespace {

// pressure samples extended to faces: interior faces average the neighbors,
// boundary faces extrapolate linearly
std::vector<double> face_values(const std::vector<double>& g, const RadialGrid& grid) {
    int cells = grid.cells;
    std::vector<double> f(cells + 1);
    f[0] = 1.5 * g[0] - 0.5 * g[1];
    f[cells] = 1.5 * g[cells - 1] - 0.5 * g[cells - 2];
    for (int i = 1; i < cells; ++i) f[i] = 0.5 * (g[i - 1] + g[i]);
    return f;
}

}  // namespace

CompensatedField solve_lame_radial(const std::vector<double>& rho, const RadialGrid& grid,
                                   const FluidParams& params, LameBc bc) {
    validate(params);
    if (static_cast<int>(rho.size()) != grid.cells) {
        throw Error(ErrorCode::grid_mismatch, "density samples do not match the grid");
    }
    int n = params.n;
    double h = grid.spacing();
    double visc = params.lambda + 2.0 * params.mu;

    std::vector<double> pressure(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
        if (!std::isfinite(rho[i]) || rho[i] < 0.0) {
            throw Error(ErrorCode::quadrature_failure, "non-finite or negative density sample");
        }
        pressure[i] = params.A * std::pow(rho[i], params.gamma);
    }
    auto pf = face_values(pressure, grid);

    // per-panel integral of s^{n-1} w(s) with w reconstructed linearly between
    // the endpoint samples and the geometric moments taken exactly; this keeps
    // the quadrature uniformly second order down to r = 0 and exact for
    // constant w
    auto panel = [n](double s0, double s1, double w0, double w1) {
        double m0 = (std::pow(s1, n) - std::pow(s0, n)) / n;
        double m1 = (std::pow(s1, n + 1) - std::pow(s0, n + 1)) / (n + 1);
        return w0 * m0 + (w1 - w0) / (s1 - s0) * (m1 - s0 * m0);
    };

    double total = 0.0;
    double volume = 0.0;
    for (int f = 0; f < grid.cells; ++f) {
        total += panel(grid.face(f), grid.face(f + 1), pf[f], pf[f + 1]);
        volume += (std::pow(grid.face(f + 1), n) - std::pow(grid.face(f), n)) / n;
    }

    CompensatedField out;
    if (bc == LameBc::bounded) {
        // gauge chosen so the cumulative integral (hence v) vanishes at r_max;
        // the same quadrature is used for both integrals so the cancellation
        // is exact discretely
        out.c_gauge = -total / volume;
    } else {
        out.c_gauge = 0.0;
    }

    // (lambda + 2 mu) div v = pressure + c_gauge; integrate outward from r_min
    double c = out.c_gauge;
    out.v.resize(grid.cells);
    double cum = 0.0;  // integral of s^{n-1} (pressure + c) up to the current inner face
    for (int i = 0; i < grid.cells; ++i) {
        double rc = grid.center(i);
        double a_c = std::pow(rc, n - 1);
        double at_center = cum + panel(grid.face(i), rc, pf[i] + c, pressure[i] + c);
        out.v[i] = at_center / (visc * a_c);
        cum += panel(grid.face(i), grid.face(i + 1), pf[i] + c, pf[i + 1] + c);
    }
    out.v_at_rmax = cum / (visc * std::pow(grid.r_max, n - 1));
    (void)h;
    return out;
}

std::vector<double> effective_flux(const std::vector<double>& u, const CompensatedField& field) {
    if (u.size() != field.v.size()) {
        throw Error(ErrorCode::grid_mismatch, "velocity and compensated field sizes differ");
    }
    std::vector<double> omega(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) omega[i] = u[i] - field.v[i];
    return omega;
}

const std::vector<double>& effective_flux(const std::vector<double>& u, CompensatedField& field) {
    field.omega = effective_flux(u, static_cast<const CompensatedField&>(field));
    return field.omega;
}

double grad_omega_l2(const std::vector<double>& omega, const RadialGrid& grid, int n) {
    if (static_cast<int>(omega.size()) != grid.cells) {
        throw Error(ErrorCode::grid_mismatch, "omega samples do not match the grid");
    }
    if (n == 2 && grid.r_min == 0.0) {
        double at_origin = 1.5 * omega[0] - 0.5 * omega[1];
        double scale = 0.0;
        for (double w : omega) scale = std::max(scale, std::abs(w));
        if (std::abs(at_origin) > 1e-8 * std::max(scale, 1e-300)) {
            throw Error(ErrorCode::origin_divergence,
                        "omega^2 / r^2 is not integrable at the origin in two dimensions");
        }
    }
    double h = grid.spacing();
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        double d;
        if (i == 0) {
            d = (omega[1] - omega[0]) / h;
        } else if (i == grid.cells - 1) {
            d = (omega[i] - omega[i - 1]) / h;
        } else {
            d = (omega[i + 1] - omega[i - 1]) / (2.0 * h);
        }
        double r = grid.center(i);
        sum += (d * d + (n - 1) * omega[i] * omega[i] / (r * r)) * grid.cell_volume(i, n);
    }
    return std::sqrt(sphere_area(n) * sum);
}

std::vector<double> apply_lame_radial(const std::vector<double>& v, const RadialGrid& grid,
                                      const FluidParams& params) {
    if (static_cast<int>(v.size()) != grid.cells) {
        throw Error(ErrorCode::grid_mismatch, "field samples do not match the grid");
    }
    int n = params.n;
    int cells = grid.cells;
    double h = grid.spacing();

    std::vector<double> w(cells), div(cells), out(cells);
    for (int i = 0; i < cells; ++i) w[i] = std::pow(grid.center(i), n - 1) * v[i];
    auto central = [&](const std::vector<double>& f, int i) {
        if (i == 0) return (f[1] - f[0]) / h;
        if (i == cells - 1) return (f[i] - f[i - 1]) / h;
        return (f[i + 1] - f[i - 1]) / (2.0 * h);
    };
    for (int i = 0; i < cells; ++i) {
        div[i] = central(w, i) / std::pow(grid.center(i), n - 1);
    }
    double visc = params.lambda + 2.0 * params.mu;
    for (int i = 0; i < cells; ++i) out[i] = visc * central(div, i);
    return out;
}

}  // namespace cnslab
