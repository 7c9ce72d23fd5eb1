#include "cnslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cnslab {

void DiagnosticSeries::append(const std::string& name, double t, double value) {
    if (!std::isfinite(t)) {
        throw Error(ErrorCode::quadrature_failure, "non-finite time in channel " + name);
    }
    auto& ch = channels_[name];
    if (!ch.empty() && !(t > ch.back().first)) {
        throw Error(ErrorCode::quadrature_failure,
                    "non-increasing time in channel " + name);
    }
    ch.emplace_back(t, value);
}

bool DiagnosticSeries::has(const std::string& name) const {
    return channels_.count(name) > 0;
}

const Channel& DiagnosticSeries::at(const std::string& name) const {
    auto it = channels_.find(name);
    if (it == channels_.end()) {
        throw Error(ErrorCode::config_error, "missing diagnostics channel " + name);
    }
    return it->second;
}

namespace {

// cell-centered radial derivative, one-sided at the ends
std::vector<double> radial_derivative(const std::vector<double>& f, double h) {
    int n = static_cast<int>(f.size());
    std::vector<double> d(n);
    if (n < 2) return d;
    d[0] = (f[1] - f[0]) / h;
    d[n - 1] = (f[n - 1] - f[n - 2]) / h;
    for (int i = 1; i < n - 1; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    return d;
}

// finite-volume divergence from face-averaged velocities; exact on linear u
std::vector<double> radial_divergence(const std::vector<double>& u, const RadialGrid& grid,
                                      int n) {
    int cells = grid.cells;
    std::vector<double> face_u(cells + 1);
    face_u[0] = 1.5 * u[0] - 0.5 * u[1];
    face_u[cells] = 1.5 * u[cells - 1] - 0.5 * u[cells - 2];
    for (int f = 1; f < cells; ++f) face_u[f] = 0.5 * (u[f - 1] + u[f]);

    std::vector<double> div(cells);
    for (int i = 0; i < cells; ++i) {
        double a_lo = std::pow(grid.face(i), n - 1);
        double a_hi = std::pow(grid.face(i + 1), n - 1);
        div[i] = (a_hi * face_u[i + 1] - a_lo * face_u[i]) / grid.cell_volume(i, n);
    }
    return div;
}

}  // namespace

double total_mass(const State& state, const RadialGrid& grid, int n) {
    return volume_integral(state.rho, grid, n);
}

double kinetic_energy(const State& state, const RadialGrid& grid, int n) {
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        sum += 0.5 * state.rho[i] * state.u[i] * state.u[i] * grid.cell_volume(i, n);
    }
    return sphere_area(n) * sum;
}

double potential_energy(const State& state, const RadialGrid& grid, const FluidParams& params) {
    if (params.gamma == 1.0) {
        throw Error(ErrorCode::degenerate_gamma,
                    "no polytropic potential at gamma = 1; use the isothermal balance");
    }
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        sum += std::pow(state.rho[i], params.gamma) * grid.cell_volume(i, params.n);
    }
    return sphere_area(params.n) * params.A / (params.gamma - 1.0) * sum;
}

double gradu_l2_squared(const State& state, const RadialGrid& grid, int n) {
    auto du = radial_derivative(state.u, grid.spacing());
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        double r = grid.center(i);
        double g = du[i] * du[i] + (n - 1) * state.u[i] * state.u[i] / (r * r);
        sum += g * grid.cell_volume(i, n);
    }
    return sphere_area(n) * sum;
}

double divu_l2_squared(const State& state, const RadialGrid& grid, int n) {
    auto div = radial_divergence(state.u, grid, n);
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) sum += div[i] * div[i] * grid.cell_volume(i, n);
    return sphere_area(n) * sum;
}

double dissipation_rate(const State& state, const RadialGrid& grid, const FluidParams& params) {
    return params.mu * gradu_l2_squared(state, grid, params.n) +
           (params.lambda + params.mu) * divu_l2_squared(state, grid, params.n);
}

double pressure_work_rate(const State& state, const RadialGrid& grid,
                          const FluidParams& params) {
    auto div = radial_divergence(state.u, grid, params.n);
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        sum += state.rho[i] * div[i] * grid.cell_volume(i, params.n);
    }
    return sphere_area(params.n) * params.A * sum;
}

double max_divu(const State& state, const RadialGrid& grid, int n) {
    auto div = radial_divergence(state.u, grid, n);
    double m = 0.0;
    for (double d : div) m = std::max(m, std::abs(d));
    return m;
}

double max_density(const State& state) {
    double m = 0.0;
    for (double r : state.rho) m = std::max(m, r);
    return m;
}

std::pair<double, double> criterion_norms(const State& state, const RadialGrid& grid,
                                          int n, double q) {
    if (!(q > 3.0 && q < 6.0)) {
        throw Error(ErrorCode::constraint_violation, "criterion norm exponent q must lie in (3, 6)");
    }
    auto drho = radial_derivative(state.rho, grid.spacing());
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        sum += std::pow(std::abs(drho[i]), q) * grid.cell_volume(i, n);
    }
    double grad_rho_lq = std::pow(sphere_area(n) * sum, 1.0 / q);
    double grad_u_l2 = std::sqrt(gradu_l2_squared(state, grid, n));
    return {grad_rho_lq, grad_u_l2};
}

double weighted_momentum_lp(const State& state, const RadialGrid& grid, int n, double p) {
    if (!(p > 0.0)) {
        throw Error(ErrorCode::constraint_violation, "momentum weight exponent must be positive");
    }
    double sum = 0.0;
    for (int i = 0; i < grid.cells; ++i) {
        sum += state.rho[i] * std::pow(std::abs(state.u[i]), p) * grid.cell_volume(i, n);
    }
    return sphere_area(n) * sum;
}

Channel energy_balance(const DiagnosticSeries& series, const FluidParams& params) {
    if (params.gamma == 1.0) {
        throw Error(ErrorCode::degenerate_gamma, "use isothermal_balance at gamma = 1");
    }
    const Channel& e_kin = series.at("e_kin");
    const Channel& e_pot = series.at("e_pot");
    const Channel& diss = series.at("dissipation_acc");
    Channel out;
    double e0 = e_kin.front().second + e_pot.front().second;
    for (std::size_t i = 0; i < e_kin.size(); ++i) {
        out.emplace_back(e_kin[i].first,
                         e_kin[i].second + e_pot[i].second + diss[i].second - e0);
    }
    return out;
}

IsothermalBalance isothermal_balance(const DiagnosticSeries& series,
                                     const FluidParams& params) {
    if (params.gamma != 1.0) {
        throw Error(ErrorCode::wrong_gamma, "isothermal balance requires gamma = 1");
    }
    const Channel& e_kin = series.at("e_kin");
    const Channel& gradu = series.at("gradu_l2sq_acc");
    const Channel& divu = series.at("divu_l2sq_acc");
    const Channel& pdv = series.at("pdv_acc");
    const Channel& bound = series.at("linf_bound_acc");

    IsothermalBalance out;
    double lam_mu = params.lambda + params.mu;
    double e0 = e_kin.front().second;
    for (std::size_t i = 0; i < e_kin.size(); ++i) {
        double t = e_kin[i].first;
        double lhs = e_kin[i].second + params.mu * gradu[i].second + 0.5 * lam_mu * divu[i].second;
        double rhs = e0 + pdv[i].second - 0.5 * lam_mu * divu[i].second;
        out.residual.emplace_back(t, lhs - rhs);
        out.slack.emplace_back(t, bound[i].second - pdv[i].second + 0.5 * lam_mu * divu[i].second);
    }
    return out;
}

Channel type1_indicator(const DiagnosticSeries& series, double t_ref) {
    const Channel& divu = series.at("max_divu");
    if (!divu.empty() && !(t_ref > divu.back().first)) {
        throw Error(ErrorCode::constraint_violation,
                    "t_ref must exceed every sample time");
    }
    Channel out;
    for (auto [t, v] : divu) out.emplace_back(t, v * (t_ref - t));
    return out;
}

Channel type1_indicator(const std::vector<State>& snapshots, const RadialGrid& grid,
                        int n, double t_ref) {
    Channel out;
    for (const auto& s : snapshots) {
        if (!(t_ref > s.t)) {
            throw Error(ErrorCode::constraint_violation,
                        "t_ref must exceed every snapshot time");
        }
        out.emplace_back(s.t, max_divu(s, grid, n) * (t_ref - s.t));
    }
    return out;
}

// ---------------------------------------------------------------------------
// blowup-rate fit
// ---------------------------------------------------------------------------

namespace {

struct FitSamples {
    std::vector<double> t, y;  // y = log rho_max
};

// least-squares of y on z(T) = log(T - t); returns sse and the line
double fit_sse(const FitSamples& s, double T, double* slope = nullptr,
               double* intercept = nullptr, double* sst = nullptr) {
    std::size_t n = s.t.size();
    double zm = 0, ym = 0;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = std::log(T - s.t[i]);
        zm += z[i];
        ym += s.y[i];
    }
    zm /= n;
    ym /= n;
    double szz = 0, szy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        szz += (z[i] - zm) * (z[i] - zm);
        szy += (z[i] - zm) * (s.y[i] - ym);
        syy += (s.y[i] - ym) * (s.y[i] - ym);
    }
    double b = szz > 0 ? szy / szz : 0.0;
    if (slope) *slope = b;
    if (intercept) *intercept = ym - b * zm;
    if (sst) *sst = syy;
    return syy - b * szy;
}

}  // namespace

RateFit density_rate_fit(const Channel& max_rho, double window_lo, double window_hi) {
    FitSamples s;
    for (auto [t, v] : max_rho) {
        if (t < window_lo || t > window_hi) continue;
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::fit_degenerate, "non-positive density sample in fit window");
        }
        if (!s.y.empty() && !(std::log(v) > s.y.back())) {
            throw Error(ErrorCode::fit_degenerate,
                        "max density not strictly increasing on the fit window");
        }
        s.t.push_back(t);
        s.y.push_back(std::log(v));
    }
    if (s.t.size() < 8) {
        throw Error(ErrorCode::fit_degenerate, "rate fit needs at least 8 samples");
    }

    double t_last = s.t.back();
    double window = t_last - s.t.front();
    // T scan bracket: just past the last sample out to ten window lengths
    double lo = t_last + 1e-6 * window;
    double hi = t_last + 10.0 * window;

    // coarse scan on a log-spaced grid of T - t_last, then golden-section
    int best = 0;
    double best_sse = std::numeric_limits<double>::infinity();
    constexpr int scan_points = 128;
    std::vector<double> scan(scan_points);
    for (int j = 0; j < scan_points; ++j) {
        double f = static_cast<double>(j) / (scan_points - 1);
        scan[j] = t_last + (lo - t_last) * std::pow((hi - t_last) / (lo - t_last), f);
        double sse = fit_sse(s, scan[j]);
        if (sse < best_sse) {
            best_sse = sse;
            best = j;
        }
    }
    double a = scan[std::max(0, best - 1)];
    double b = scan[std::min(scan_points - 1, best + 1)];

    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = fit_sse(s, x1), f2 = fit_sse(s, x2);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, b); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = fit_sse(s, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = fit_sse(s, x2);
        }
    }

    RateFit fit;
    fit.t_hat = 0.5 * (a + b);
    double slope, intercept, sst;
    double sse = fit_sse(s, fit.t_hat, &slope, &intercept, &sst);
    fit.kappa_hat = -slope;
    fit.m_hat = std::exp(intercept);
    fit.r_squared = sst > 0 ? 1.0 - sse / sst : 1.0;
    fit.samples = s.t.size();
    fit.window_lo = s.t.front();
    fit.window_hi = t_last;
    return fit;
}

}  // namespace cnslab
