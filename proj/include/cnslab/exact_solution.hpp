#pragma once

#include <optional>
#include <utility>

#include "cnslab/errors.hpp"
#include "cnslab/params.hpp"

namespace cnslab {

// Closed-form radial solution that blows up at t = T:
//   rho(t, x) = C_n^{1/(gamma-1)} (|x| / (T - t))^{2/(gamma-1)}
//   u(t, x)   = -2 x / ([n(gamma-1) + 2] (T - t))
// with C_2 = (gamma-1)^2 / (2 A gamma^3) and
//      C_3 = 3 (gamma-1)^2 / (A gamma (3 gamma - 1)^2).
// The velocity is linear in x, so all viscous terms vanish on it and the pair
// solves the system for every admissible (mu, lambda).
class ExactBlowup {
  public:
    ExactBlowup(const FluidParams& params, double blowup_time);

    double blowup_time() const { return T_; }
    const FluidParams& params() const { return params_; }

    double constant() const { return C_; }          // C_n
    double beta() const { return beta_; }           // -2/(n(gamma-1)+2)
    // |div u| (T - t), constant in time: 2n/(n(gamma-1)+2)
    double divu_rate() const { return -params_.n * beta_; }

    // field values at radius r >= 0 (u is the radial component)
    double density(double t, double r) const;
    double velocity(double t, double r) const;
    std::pair<double, double> evaluate(double t, double r) const;

    // analytic derivatives used by the residual and by truncation studies
    double drho_dt(double t, double r) const;
    double drho_dr(double t, double r) const;
    double dpressure_dr(double t, double r) const;  // d/dr (A rho^gamma)
    double du_dt(double t, double r) const;
    double du_dr(double t, double r) const;

    struct Residual {
        double mass;            // rho_t + div(rho u)
        double momentum;        // radial component of the momentum balance
        double fd_discrepancy;  // max |analytic - central difference|, 0 if unchecked
    };

    // Pointwise residual of both equations, conservative form, all derivatives
    // analytic.  When h_fd is given the analytic derivatives are cross-checked
    // against central finite differences of step h_fd.
    // Evaluation inside |x| < origin_guard is rejected (limited smoothness of
    // rho^gamma at the origin for some gamma).
    Residual residual(double t, double r, std::optional<double> h_fd = std::nullopt) const;

    static constexpr double origin_guard = 1e-6;

  private:
    void require_before_blowup(double t) const;

    FluidParams params_;
    double T_;
    double C_;
    double beta_;
};

// C_n of the solution above; throws DegenerateGamma at gamma = 1.
double blowup_constant(const FluidParams& params);

}  // namespace cnslab
