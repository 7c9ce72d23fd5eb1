#include "cnslab/profile.hpp"

#include <cmath>

#include "cnslab/exact_solution.hpp"
#include "cnslab/interpolate.hpp"

namespace cnslab {

struct SampledField::Impl {
    Impl(std::vector<double> samples, const RadialGrid& grid, int order)
        : interp(std::move(samples), grid, order) {}
    RadialInterpolant interp;
};

SampledField::SampledField(std::vector<double> samples, const RadialGrid& grid, int order)
    : impl_(std::make_shared<Impl>(std::move(samples), grid, order)) {}

double SampledField::value(double r) const { return impl_->interp.value(r); }
double SampledField::deriv(double r) const { return impl_->interp.deriv(r); }
double SampledField::deriv2(double r) const { return impl_->interp.deriv2(r); }

double beta_of(const FluidParams& params) {
    validate(params);
    return -2.0 / (params.n * (params.gamma - 1.0) + 2.0);
}

Profile explicit_profile(const FluidParams& params) {
    double c = std::pow(blowup_constant(params), 1.0 / (params.gamma - 1.0));
    double k = 2.0 / (params.gamma - 1.0);
    Profile p;
    p.theta = std::make_shared<AnalyticField>(
        [c, k](double r) { return c * std::pow(r, k); },
        [c, k](double r) { return c * k * std::pow(r, k - 1.0); },
        [c, k](double r) { return c * k * (k - 1.0) * std::pow(r, k - 2.0); });
    double beta = beta_of(params);
    p.v = std::make_shared<AnalyticField>(
        [beta](double r) { return beta * r; },
        [beta](double) { return beta; },
        [](double) { return 0.0; });
    p.beta = beta;
    return p;
}

namespace {

constexpr double origin_guard = 1e-6;

void require_off_origin(double y_r) {
    if (std::abs(y_r) < origin_guard) {
        throw Error(ErrorCode::origin_singularity,
                    "profile residual excludes a neighborhood of the origin");
    }
}

// d/dr Theta^gamma, safe at Theta = 0 for gamma >= 1
double pressure_gradient(double A, double gamma, double theta, double dtheta) {
    return A * gamma * std::pow(theta, gamma - 1.0) * dtheta;
}

}  // namespace

ProfileResidual profile_residual(const Profile& p, const FluidParams& params, double y_r) {
    validate(params);
    require_off_origin(y_r);
    double g = params.gamma;
    int n = params.n;
    double r = y_r;

    double th = p.theta->value(r);
    double dth = p.theta->deriv(r);
    double v = p.v->value(r);
    double dv = p.v->deriv(r);
    double ddv = p.v->deriv2(r);

    ProfileResidual res;
    res.mass = th / g + (g + 1.0) / (2.0 * g) * r * dth + (dth * v + th * (dv + (n - 1) * v / r));

    // radial fields are curl-free, so Lap V = grad div V and the two viscous
    // terms share the scalar operator below
    double lap = ddv + (n - 1) * dv / r - (n - 1) * v / (r * r);
    res.momentum = ((g - 1.0) / (2.0 * g) * v + (g + 1.0) / (2.0 * g) * r * dv + v * dv) * th +
                   pressure_gradient(params.A, g, th, dth) -
                   (params.lambda + 2.0 * params.mu) * lap;
    return res;
}

std::pair<double, double> reduced_residual(const Profile& p, const FluidParams& params,
                                           double y_r) {
    validate(params);
    if (!p.beta) {
        throw Error(ErrorCode::not_linear_velocity,
                    "reduced system requires a linear velocity profile (beta set)");
    }
    require_off_origin(y_r);
    double g = params.gamma;
    double beta = *p.beta;
    double r = y_r;
    double th = p.theta->value(r);
    double dth = p.theta->deriv(r);

    double r1 = (1.0 / g + params.n * beta) * th + ((g + 1.0) / (2.0 * g) + beta) * r * dth;
    double r2 = pressure_gradient(params.A, g, th, dth) + (1.0 + beta) * beta * r * th;
    return {r1, r2};
}

std::pair<double, double> reconstruct(const Profile& p, const FluidParams& params,
                                      double T, double t, double r) {
    validate(params);
    if (t >= T) {
        throw Error(ErrorCode::evaluation_past_blowup, "reconstruction past blowup time");
    }
    double g = params.gamma;
    double s = T - t;
    double y = r * std::pow(s, -(g + 1.0) / (2.0 * g));
    double rho = std::pow(s, -1.0 / g) * p.theta->value(y);
    double u = std::pow(s, -(g - 1.0) / (2.0 * g)) * p.v->value(y);
    return {rho, u};
}

namespace {

double composite_simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int j = 1; j < panels; ++j) sum += (j % 2 ? 4.0 : 2.0) * f(a + j * h);
    return sum * h / 3.0;
}

// step-halving to a relative tolerance; throws NonIntegrable on non-convergence
double converged_quadrature(const std::function<double(double)>& f, double a, double b,
                            double tol) {
    int panels = 64;
    double prev = composite_simpson(f, a, b, panels);
    for (int pass = 0; pass < 16; ++pass) {
        panels *= 2;
        double next = composite_simpson(f, a, b, panels);
        if (!std::isfinite(next)) break;
        if (std::abs(next - prev) <= tol * std::max(1.0, std::abs(next))) return next;
        prev = next;
    }
    throw Error(ErrorCode::non_integrable,
                "quadrature failed to converge under step halving");
}

}  // namespace

ObstructionResult lp_obstruction(const Profile& p, const FluidParams& params,
                                 double exponent_p, double truncation_radius) {
    validate(params);
    if (!(exponent_p > 1.0)) {
        throw Error(ErrorCode::constraint_violation, "obstruction exponent must exceed 1");
    }
    if (!(truncation_radius > 0.0)) {
        throw Error(ErrorCode::constraint_violation, "truncation radius must be positive");
    }
    double g = params.gamma;
    int n = params.n;
    double R = truncation_radius;

    auto integrand = [&](double r) {
        if (r == 0.0) return 0.0;  // r^{n-1} kills the endpoint for n >= 2
        return std::pow(std::abs(p.theta->value(r)), exponent_p) * std::pow(r, n - 1);
    };
    double lp_p = sphere_area(n) * converged_quadrature(integrand, 0.0, R, 1e-10);

    // sup |div V| on the truncated domain, with the r -> 0 limit n V'(0)
    double divv = std::abs(n * p.v->deriv(origin_guard));
    constexpr int scan = 4096;
    for (int j = 1; j <= scan; ++j) {
        double r = R * j / scan;
        divv = std::max(divv, std::abs(p.v->deriv(r) + (n - 1) * p.v->value(r) / r));
    }

    ObstructionResult res;
    res.theta_lp_p = lp_p;
    res.divv_linf = divv;
    res.lhs = std::abs((2.0 * exponent_p - 3.0 * (g + 1.0)) / (2.0 * exponent_p * g)) * lp_p;
    res.rhs = (exponent_p - 1.0) / exponent_p * lp_p * divv;
    res.violated = res.lhs > res.rhs;
    return res;
}

}  // namespace cnslab
