#include "cnslab/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cnslab {

namespace {

[[noreturn]] void fail_constraint(const std::string& which) {
    throw Error(ErrorCode::constraint_violation, "constraint violated: " + which);
}

}  // namespace

void validate(const FluidParams& params) {
    if (!(params.n == 2 || params.n == 3)) fail_constraint("n in {2, 3}");
    if (!(params.gamma >= 1.0)) fail_constraint("gamma >= 1");
    if (!(params.A > 0.0)) fail_constraint("A > 0");
    if (!(params.mu > 0.0)) fail_constraint("mu > 0");
    if (!(params.n * params.lambda + 2.0 * params.mu > 0.0)) {
        std::ostringstream msg;
        msg << "n*lambda + 2*mu > 0 (got " << params.n * params.lambda + 2.0 * params.mu << ")";
        fail_constraint(msg.str());
    }
}

double select_p(double lambda, double mu) {
    if (!(mu > 0.0)) fail_constraint("mu > 0");
    // f(R) = 4 mu - (lambda + mu) R^2 + 4 mu R, needed positive at R = p - 2.
    // f(1) = 7 mu - lambda, so feasibility ends at lambda = 7 mu.
    if (lambda >= 7.0 * mu) {
        throw Error(ErrorCode::no_feasible_p,
                    "no feasible p: lambda >= 7 mu makes f(1) = 7 mu - lambda <= 0");
    }
    if (lambda < 2.0 * mu) return 4.0;  // f(2) = 4 (2 mu - lambda) > 0

    // lambda + mu > 0 under the physical constraint, so f is concave with one
    // positive root R+ and f > 0 on (0, R+).
    double a = lambda + mu;
    double r_plus = (2.0 * mu + std::sqrt(4.0 * mu * mu + 4.0 * mu * a)) / a;
    double upper = 2.0 + std::min(r_plus, 4.0);
    return 0.5 * (3.0 + upper);  // midpoint of the feasible interval (3, upper)
}

double kappa_bound(double gamma, double p) {
    if (!(gamma >= 1.0)) fail_constraint("gamma >= 1");
    if (!(p > 3.0 && p < 6.0)) fail_constraint("p in (3, 6)");
    return std::min({1.0 / (gamma + 3.0), 1.0 / (3.0 * gamma), (p - 3.0) / (p + 1.0)});
}

double delta_of(double gamma) {
    if (!(gamma >= 1.0)) fail_constraint("gamma >= 1");
    if (gamma <= 1.5) return (gamma + 2.0) / (gamma + 4.0);
    return (3.0 * gamma - 1.0) / (3.0 * gamma + 1.0);
}

double scaling_dimension(Quantity q, double gamma) {
    if (!(gamma >= 1.0)) fail_constraint("gamma >= 1");
    switch (q) {
        case Quantity::space: return 1.0;
        case Quantity::time: return 2.0 * gamma / (gamma + 1.0);
        case Quantity::density: return -2.0 / (gamma + 1.0);
        case Quantity::velocity: return -(gamma - 1.0) / (gamma + 1.0);
    }
    fail_constraint("unknown quantity");
}

CriteriaConstants criteria_for(const FluidParams& params) {
    validate(params);
    CriteriaConstants c;
    c.p = select_p(params.lambda, params.mu);
    c.kappa_max = kappa_bound(params.gamma, c.p);
    c.delta = delta_of(params.gamma);
    return c;
}

}  // namespace cnslab
