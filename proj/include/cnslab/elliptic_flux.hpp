#pragma once

#include <vector>

#include "cnslab/errors.hpp"
#include "cnslab/grid.hpp"
#include "cnslab/params.hpp"

namespace cnslab {

enum class LameBc {
    bounded,     // v = 0 at the outer wall
    free_space,  // truncated whole space: gauge 0, decay emulated
};

// Solution of the radial Lame problem L v = A grad rho^gamma together with the
// compensated velocity omega = u - v.  For curl-free radial fields the
// operator collapses to (lambda + 2 mu) grad div, so
//   (lambda + 2 mu) div v = A rho^gamma + c_gauge
// and v is a single quadrature of the pressure field.
struct CompensatedField {
    std::vector<double> v;       // cell-centered radial samples
    double c_gauge = 0;          // integration constant fixing the divergence relation
    double v_at_rmax = 0;        // truncation error indicator for the free-space gauge
    std::vector<double> omega;   // u - v, filled by effective_flux
};

// bounded: c_gauge = -n A integral s^{n-1} rho^gamma ds / (r_max^n - r_min^n),
// which makes v vanish at the outer wall.  free_space: c_gauge = 0.
// Quadrature is composite trapezoid on the cell faces of the grid.
CompensatedField solve_lame_radial(const std::vector<double>& rho, const RadialGrid& grid,
                                   const FluidParams& params, LameBc bc);

// omega = u - v cellwise; throws GridMismatch on size disagreement.
std::vector<double> effective_flux(const std::vector<double>& u, const CompensatedField& field);
// convenience: stores omega on the field and returns a reference to it
const std::vector<double>& effective_flux(const std::vector<double>& u, CompensatedField& field);

// Radial L^2 gradient norm
//   ( |S^{n-1}| integral (omega'^2 + (n-1) omega^2 / r^2) r^{n-1} dr )^{1/2}.
// Throws OriginDivergence when n = 2, r_min = 0 and omega does not vanish at
// the origin (the omega^2/r^2 integrand is then non-integrable).
double grad_omega_l2(const std::vector<double>& omega, const RadialGrid& grid, int n);

// Discrete operator (lambda + 2 mu) d/dr ( r^{1-n} d/dr ( r^{n-1} . ) ) applied
// to cell-centered samples; used to verify the computed v against A d/dr rho^gamma.
std::vector<double> apply_lame_radial(const std::vector<double>& v, const RadialGrid& grid,
                                      const FluidParams& params);

}  // namespace cnslab
