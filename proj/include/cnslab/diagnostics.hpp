#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnslab/elliptic_flux.hpp"
#include "cnslab/errors.hpp"
#include "cnslab/grid.hpp"
#include "cnslab/params.hpp"

namespace cnslab {

using Channel = std::vector<std::pair<double, double>>;  // (t, value)

// Named scalar monitors of a run.  Channels keep strictly increasing time.
class DiagnosticSeries {
  public:
    void append(const std::string& name, double t, double value);
    bool has(const std::string& name) const;
    const Channel& at(const std::string& name) const;
    const std::map<std::string, Channel>& channels() const { return channels_; }
    bool empty() const { return channels_.empty(); }

    std::map<std::string, std::string> meta;  // run id, params, grid

  private:
    std::map<std::string, Channel> channels_;
};

// One diagnostics record per accepted step; doubles as a CSV row.
struct DiagRow {
    double t = 0;
    double mass = 0;
    double e_kin = 0;
    double e_pot = 0;  // nan for gamma = 1 (no polytropic potential)
    double dissipation_acc = 0;
    double balance_residual = 0;  // energy law (gamma > 1) or isothermal identity
    double max_rho = 0;
    double max_divu = 0;
    double type1_indicator = 0;  // nan when no reference blowup time is set
    double grad_rho_lq = 0;
    double grad_u_l2 = 0;
    double weighted_lp = 0;
    double floored_mass_acc = 0;
    double bound_slack = 0;  // isothermal bound slack, nan for gamma > 1
    std::optional<double> grad_omega_l2;  // only when the flux channel is on
};

struct DiagnosticsOptions {
    bool enabled = false;
    double q = 4.0;                  // exponent for ||grad rho||_{L^q}, in (3, 6)
    double p = 4.0;                  // exponent for the rho |u|^p monitor
    std::optional<double> t_ref;     // reference blowup time for the type-I indicator
    bool effective_flux = false;     // per-step grad_omega_l2 (costs a Lame solve)
    LameBc flux_bc = LameBc::bounded;
    bool keep_in_memory = true;      // collect a DiagnosticSeries on the trajectory
    std::function<void(const DiagRow&)> row_sink;  // optional streaming consumer
};

// --- per-snapshot quantities -------------------------------------------------

double total_mass(const State& state, const RadialGrid& grid, int n);
double kinetic_energy(const State& state, const RadialGrid& grid, int n);
// A/(gamma-1) * integral rho^gamma; throws DegenerateGamma at gamma = 1
double potential_energy(const State& state, const RadialGrid& grid, const FluidParams& params);
// integral mu |grad u|^2 + (lambda+mu) (div u)^2 with the radial gradient measure
double dissipation_rate(const State& state, const RadialGrid& grid, const FluidParams& params);
// A * integral rho div u
double pressure_work_rate(const State& state, const RadialGrid& grid, const FluidParams& params);
double gradu_l2_squared(const State& state, const RadialGrid& grid, int n);
double divu_l2_squared(const State& state, const RadialGrid& grid, int n);
double max_divu(const State& state, const RadialGrid& grid, int n);
double max_density(const State& state);

// (||d rho/dr||_{L^q}, ||grad u||_{L^2}) with the radial measure
std::pair<double, double> criterion_norms(const State& state, const RadialGrid& grid,
                                          int n, double q);
// integral rho |u|^p
double weighted_momentum_lp(const State& state, const RadialGrid& grid, int n, double p);

// --- channel post-processing -------------------------------------------------

// Energy-law residual per record: E(t) + accumulated dissipation - E(0),
// E = integral( rho u^2 / 2 + A/(gamma-1) rho^gamma ).  Requires channels
// e_kin, e_pot, dissipation_acc.  Throws DegenerateGamma at gamma = 1.
Channel energy_balance(const DiagnosticSeries& series, const FluidParams& params);

struct IsothermalBalance {
    Channel residual;  // identity residual of the gamma = 1 balance
    Channel slack;     // bound slack, nonnegative when the quadratures are consistent
};

// gamma = 1 balance: kinetic energy plus viscous time integrals versus the
// accumulated pressure work, and the slack of the Cauchy-Schwarz bound
// A^2 ||rho||_L1 / (2 (lambda+mu)) * integral ||rho||_Linf.
// Throws WrongGamma unless gamma == 1.
IsothermalBalance isothermal_balance(const DiagnosticSeries& series, const FluidParams& params);

// max_cell |div u| * (t_ref - t) from the max_divu channel
Channel type1_indicator(const DiagnosticSeries& series, double t_ref);
// same, computed directly from snapshots
Channel type1_indicator(const std::vector<State>& snapshots, const RadialGrid& grid,
                        int n, double t_ref);

// --- blowup-rate fit ----------------------------------------------------------

struct RateFit {
    double kappa_hat = 0;   // fitted exponent of M (T - t)^{-kappa}
    double t_hat = 0;       // fitted blowup time, beyond the last sample
    double m_hat = 0;       // fitted amplitude
    double r_squared = 0;   // quality of the log-log regression
    std::size_t samples = 0;
    double window_lo = 0, window_hi = 0;
};

// Joint least-squares fit of (kappa, T, M) to log rho_max = log M - kappa log(T - t)
// over the window, scanning a T grid refined by golden-section.  Needs >= 8
// strictly increasing samples; throws FitDegenerate otherwise.
RateFit density_rate_fit(const Channel& max_rho, double window_lo, double window_hi);

}  // namespace cnslab
