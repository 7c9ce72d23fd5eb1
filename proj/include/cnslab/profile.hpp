#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "cnslab/errors.hpp"
#include "cnslab/grid.hpp"
#include "cnslab/params.hpp"

namespace cnslab {

// Radial scalar field of the similarity variable with two derivatives.
// Closed forms and sampled grids share this interface so the residual
// operators below accept either.
class RadialField {
  public:
    virtual ~RadialField() = default;
    virtual double value(double r) const = 0;
    virtual double deriv(double r) const = 0;
    virtual double deriv2(double r) const = 0;
};

class AnalyticField final : public RadialField {
  public:
    using Fn = std::function<double(double)>;
    AnalyticField(Fn f, Fn d1, Fn d2)
        : f_(std::move(f)), d1_(std::move(d1)), d2_(std::move(d2)) {}

    double value(double r) const override { return f_(r); }
    double deriv(double r) const override { return d1_(r); }
    double deriv2(double r) const override { return d2_(r); }

  private:
    Fn f_, d1_, d2_;
};

// Samples on a uniform radial grid, evaluated through cubic interpolation.
class SampledField final : public RadialField {
  public:
    SampledField(std::vector<double> samples, const RadialGrid& grid, int order = 3);

    double value(double r) const override;
    double deriv(double r) const override;
    double deriv2(double r) const override;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Similarity profile pair: density profile Theta(y) and the radial component
// of the velocity profile V(y).  beta is set when V(y) = beta * y exactly.
struct Profile {
    std::shared_ptr<const RadialField> theta;
    std::shared_ptr<const RadialField> v;
    std::optional<double> beta;
};

struct ProfileResidual {
    double mass;
    double momentum;
};

struct ObstructionResult {
    double lhs;          // |(2p - 3(gamma+1)) / (2 p gamma)| * ||Theta||_p^p
    double rhs;          // ((p-1)/p) * ||Theta||_p^p * ||div V||_inf
    bool violated;       // lhs > rhs
    double theta_lp_p;   // ||Theta||_p^p on |y| <= R
    double divv_linf;    // sup |div V| on |y| <= R
};

// beta with which the linear-velocity reduction is solvable: -2/(n(gamma-1)+2)
double beta_of(const FluidParams& params);

// Theta(y) = C_n^{1/(gamma-1)} |y|^{2/(gamma-1)},  V(y) = beta * y.
// Throws DegenerateGamma at gamma = 1.
Profile explicit_profile(const FluidParams& params);

// Residual of the similarity system at radius y_r:
//   (1/gamma) Theta + ((gamma+1)/(2 gamma)) y.grad Theta + div(Theta V) = 0
//   [((gamma-1)/(2 gamma)) V + ((gamma+1)/(2 gamma)) y.grad V + V.grad V] Theta
//       + A grad Theta^gamma = mu Lap V + (lambda + mu) grad div V
// (momentum component reported along the radial direction).
ProfileResidual profile_residual(const Profile& p, const FluidParams& params, double y_r);

// Residual of the over-determined linear-velocity reduction:
//   r1 = (1/gamma + n beta) Theta + ((gamma+1)/(2 gamma) + beta) y.grad Theta
//   r2 = A grad Theta^gamma + (1 + beta) beta y Theta   (radial component)
// Throws NotLinearVelocity when the profile has no beta.
std::pair<double, double> reduced_residual(const Profile& p, const FluidParams& params,
                                           double y_r);

// Solution reconstructed from the profile:
//   rho(t, x) = (T-t)^{-1/gamma}          Theta(x (T-t)^{-(gamma+1)/(2 gamma)})
//   u(t, x)   = (T-t)^{-(gamma-1)/(2 gamma)} V(same argument)
std::pair<double, double> reconstruct(const Profile& p, const FluidParams& params,
                                      double T, double t, double r);

// Both sides of the L^p inequality satisfied by decaying profiles, computed by
// quadrature on |y| <= truncation_radius.  Never claims more than the
// inequality itself at this truncation.
ObstructionResult lp_obstruction(const Profile& p, const FluidParams& params,
                                 double exponent_p, double truncation_radius);

}  // namespace cnslab
