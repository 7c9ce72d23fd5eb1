#include "cnslab/exact_solution.hpp"

#include <cmath>
#include <sstream>

namespace cnslab {

double blowup_constant(const FluidParams& params) {
    validate(params);
    double g = params.gamma;
    if (g == 1.0) {
        throw Error(ErrorCode::degenerate_gamma,
                    "blowup constant degenerates at gamma = 1");
    }
    double gm1 = g - 1.0;
    if (params.n == 2) return gm1 * gm1 / (2.0 * params.A * g * g * g);
    double m = 3.0 * g - 1.0;
    return 3.0 * gm1 * gm1 / (params.A * g * m * m);
}

ExactBlowup::ExactBlowup(const FluidParams& params, double blowup_time)
    : params_(params), T_(blowup_time) {
    validate(params_);
    if (params_.gamma <= 1.0) {
        throw Error(ErrorCode::degenerate_gamma, "the blowup solution requires gamma > 1");
    }
    if (!(T_ > 0.0)) {
        throw Error(ErrorCode::constraint_violation, "blowup time must be positive");
    }
    C_ = blowup_constant(params_);
    beta_ = -2.0 / (params_.n * (params_.gamma - 1.0) + 2.0);
}

void ExactBlowup::require_before_blowup(double t) const {
    if (t >= T_) {
        std::ostringstream msg;
        msg << "evaluation at t = " << t << " past blowup time T = " << T_;
        throw Error(ErrorCode::evaluation_past_blowup, msg.str());
    }
}

double ExactBlowup::density(double t, double r) const {
    require_before_blowup(t);
    double k = 2.0 / (params_.gamma - 1.0);
    return std::pow(C_, 1.0 / (params_.gamma - 1.0)) * std::pow(r / (T_ - t), k);
}

double ExactBlowup::velocity(double t, double r) const {
    require_before_blowup(t);
    return beta_ * r / (T_ - t);
}

std::pair<double, double> ExactBlowup::evaluate(double t, double r) const {
    return {density(t, r), velocity(t, r)};
}

double ExactBlowup::drho_dt(double t, double r) const {
    double k = 2.0 / (params_.gamma - 1.0);
    return k * density(t, r) / (T_ - t);
}

double ExactBlowup::drho_dr(double t, double r) const {
    double k = 2.0 / (params_.gamma - 1.0);
    return k * density(t, r) / r;
}

double ExactBlowup::dpressure_dr(double t, double r) const {
    double g = params_.gamma;
    double k = 2.0 / (g - 1.0);
    return params_.A * g * k * std::pow(density(t, r), g) / r;
}

double ExactBlowup::du_dt(double t, double r) const {
    return velocity(t, r) / (T_ - t);
}

double ExactBlowup::du_dr(double t, double /*r*/) const {
    require_before_blowup(t);
    return beta_ / (T_ - t);
}

ExactBlowup::Residual ExactBlowup::residual(double t, double r,
                                            std::optional<double> h_fd) const {
    require_before_blowup(t);
    if (std::abs(r) < origin_guard) {
        throw Error(ErrorCode::origin_singularity,
                    "residual evaluation excludes a neighborhood of the origin");
    }

    // the terms cancel only in exact arithmetic and can reach ~1e8 near the
    // blowup, so everything (the constants included) is evaluated and summed
    // in extended precision
    int n = params_.n;
    long double g = params_.gamma;
    long double a = params_.A;
    long double gm1 = g - 1.0L;
    long double k = 2.0L / gm1;
    long double c = n == 2 ? gm1 * gm1 / (2.0L * a * g * g * g)
                           : 3.0L * gm1 * gm1 / (a * g * (3.0L * g - 1.0L) * (3.0L * g - 1.0L));
    long double beta = -2.0L / (n * gm1 + 2.0L);
    long double s = static_cast<long double>(T_) - t;
    long double x = r;
    long double rho = std::pow(c, 1.0L / gm1) * std::pow(x / s, k);
    long double u = beta * x / s;
    long double rho_t = k * rho / s;
    long double rho_r = k * rho / x;
    long double u_t = u / s;
    long double u_r = beta / s;
    long double press_r = a * g * k * std::pow(rho, g) / x;

    Residual res;
    res.mass = static_cast<double>(rho_t + rho_r * u + rho * u_r + (n - 1) * rho * u / x);

    // u is linear in x: u_rr = 0 and the remaining viscous pieces cancel
    long double viscous = (static_cast<long double>(params_.lambda) + 2.0L * params_.mu) *
                          (n - 1) * (u_r / x - u / (x * x));
    res.momentum = static_cast<double>(rho_t * u + rho * u_t + rho_r * u * u +
                                       2.0L * rho * u * u_r + (n - 1) * rho * u * u / x +
                                       press_r - viscous);

    res.fd_discrepancy = 0.0;
    if (h_fd) {
        double h = *h_fd;
        auto central_r = [&](auto&& f) { return (f(t, r + h) - f(t, r - h)) / (2.0 * h); };
        auto central_t = [&](auto&& f) { return (f(t + h, r) - f(t - h, r)) / (2.0 * h); };
        auto rho_fn = [&](double s, double x) { return density(s, x); };
        auto u_fn = [&](double s, double x) { return velocity(s, x); };
        auto p_fn = [&](double s, double x) {
            return params_.A * std::pow(density(s, x), params_.gamma);
        };
        double worst = 0.0;
        worst = std::max(worst, std::abs(central_t(rho_fn) - drho_dt(t, r)));
        worst = std::max(worst, std::abs(central_r(rho_fn) - drho_dr(t, r)));
        worst = std::max(worst, std::abs(central_r(p_fn) - dpressure_dr(t, r)));
        worst = std::max(worst, std::abs(central_t(u_fn) - du_dt(t, r)));
        worst = std::max(worst, std::abs(central_r(u_fn) - du_dr(t, r)));
        res.fd_discrepancy = worst;
    }
    return res;
}

}  // namespace cnslab
