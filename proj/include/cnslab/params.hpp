#pragma once

#include "cnslab/errors.hpp"

namespace cnslab {

// Physical and model constants of the barotropic system
//   rho_t + div(rho u) = 0
//   (rho u)_t + div(rho u (x) u) + grad(A rho^gamma) = mu Lap(u) + (lambda + mu) grad div(u)
// with the dissipativity constraint mu > 0, n*lambda + 2*mu > 0.
struct FluidParams {
    double gamma = 2.0;   // adiabatic exponent, >= 1 (gamma = 1 is isothermal)
    double A = 1.0;       // pressure constant, > 0
    double mu = 1.0;      // shear viscosity, > 0
    double lambda = 1.0;  // second viscosity
    int n = 3;            // space dimension, 2 or 3
};

// Derived threshold constants used by the regularity criteria.
struct CriteriaConstants {
    double p;          // integrability exponent, in (3, 6)
    double kappa_max;  // admissible rate exponent (open bound, compare strictly)
    double delta;      // space-time integrability exponent, in (0, 1)
};

enum class Quantity { space, time, density, velocity };

// Throws ConstraintViolation naming the first failed inequality.
void validate(const FluidParams& params);

// Picks p in (3, 6) with f(p - 2) > 0 for f(R) = 4 mu - (lambda + mu) R^2 + 4 mu R.
// Returns 4 whenever lambda < 2 mu; otherwise the midpoint of the feasible
// interval (3, 2 + min(R+, 4)) where R+ is the positive root of f.
// Throws NoFeasibleP when lambda >= 7 mu (f(1) = 7 mu - lambda <= 0).
double select_p(double lambda, double mu);

// min{ 1/(gamma+3), 1/(3 gamma), (p-3)/(p+1) }.  The bound is open: callers
// must compare their rate exponent strictly below the returned value.
double kappa_bound(double gamma, double p);

// (gamma+2)/(gamma+4) on 1 <= gamma <= 3/2, else (3 gamma - 1)/(3 gamma + 1).
// The two branches agree (7/11) at gamma = 3/2.
double delta_of(double gamma);

// Dimension assignments induced by the scaling invariance:
// x -> +1, t -> +2 gamma/(gamma+1), rho -> -2/(gamma+1), u -> -(gamma-1)/(gamma+1).
double scaling_dimension(Quantity q, double gamma);

CriteriaConstants criteria_for(const FluidParams& params);

}  // namespace cnslab
