#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cnslab/diagnostics.hpp"
#include "cnslab/exact_solution.hpp"
#include "cnslab/solver.hpp"

using namespace cnslab;

namespace {

const FluidParams n3g2{2, 1, 1, 1, 3};

State field_state(const RadialGrid& grid, double (*rho)(double), double (*u)(double)) {
    State s;
    s.rho.resize(grid.cells);
    s.u.resize(grid.cells);
    for (int i = 0; i < grid.cells; ++i) {
        s.rho[i] = rho(grid.center(i));
        s.u[i] = u(grid.center(i));
    }
    return s;
}

}  // namespace

TEST_CASE("mass of reference fields") {
    RadialGrid grid{0.0, 1.0, 1000};
    State unit = rest_state(grid, 1.0);
    CHECK(total_mass(unit, grid, 3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-12));

    State vac = rest_state(grid, 0.0);
    CHECK(total_mass(vac, grid, 3) == 0.0);

    // blowup snapshot at t = 0, T = 1: integral 0.06 r^2 4 pi r^2 dr = 0.24 pi / 5
    State blow = field_state(
        grid, [](double r) { return 0.06 * r * r; }, [](double) { return 0.0; });
    CHECK(total_mass(blow, grid, 3) == doctest::Approx(0.24 * M_PI / 5.0).epsilon(1e-6));
}

TEST_CASE("criterion norms closed form") {
    RadialGrid grid{0.0, 1.0, 2000};
    State s = field_state(
        grid, [](double r) { return r; }, [](double) { return 0.0; });
    auto [grad_rho_lq, grad_u_l2] = criterion_norms(s, grid, 3, 4.0);
    CHECK(grad_rho_lq == doctest::Approx(std::pow(4.0 * M_PI / 3.0, 0.25)).epsilon(1e-10));
    CHECK(grad_u_l2 == 0.0);

    State rest = rest_state(grid, 0.5);
    auto norms = criterion_norms(rest, grid, 3, 4.0);
    CHECK(norms.first == 0.0);
    CHECK(norms.second == 0.0);
    CHECK_THROWS_AS(criterion_norms(s, grid, 3, 2.0), Error);
}

TEST_CASE("weighted momentum integral closed form") {
    RadialGrid grid{0.0, 1.0, 2000};
    State s = field_state(
        grid, [](double) { return 1.0; }, [](double r) { return r; });
    CHECK(weighted_momentum_lp(s, grid, 3, 4.0) ==
          doctest::Approx(4.0 * M_PI / 7.0).epsilon(1e-6));
    CHECK(weighted_momentum_lp(rest_state(grid, 1.0), grid, 3, 4.0) == 0.0);
}

TEST_CASE("integral diagnostics converge at the quadrature order") {
    auto mass_at = [&](int cells) {
        RadialGrid grid{0.0, 1.0, cells};
        return total_mass(field_state(grid, [](double r) { return std::exp(-r) + r * r * r; },
                                      [](double) { return 0.0; }),
                          grid, 3);
    };
    double exact_limit = mass_at(8000);
    double e1 = std::abs(mass_at(100) - exact_limit);
    double e2 = std::abs(mass_at(200) - exact_limit);
    CHECK(e1 / e2 >= 3.2);  // midpoint rule is second order
}

TEST_CASE("type-I indicator of the blowup solution is flat and supercritical") {
    FluidParams params = n3g2;
    ExactBlowup sol(params, 1.0);
    RadialGrid grid{0.2, 1.0, 400};
    std::vector<State> snaps;
    for (double t : {0.1, 0.25, 0.4, 0.55, 0.7}) snaps.push_back(exact_state(sol, grid, t));
    Channel ind = type1_indicator(snaps, grid, 3, 1.0);
    for (auto [t, v] : ind) {
        CHECK(v == doctest::Approx(1.2).epsilon(0.01));
        CHECK(v > kappa_bound(2.0, 4.0));
    }
    // rest state has a vanishing indicator
    std::vector<State> rests = {rest_state(grid, 1.0)};
    rests[0].t = 0.0;
    Channel zero = type1_indicator(rests, grid, 3, 1.0);
    CHECK(zero.front().second == 0.0);

    CHECK_THROWS_AS(type1_indicator(snaps, grid, 3, 0.5), Error);
}

TEST_CASE("energy balance of a rest trajectory is identically zero") {
    RadialGrid grid{0.0, 1.0, 50};
    BoundaryCondition bc{BcKind::axis, BcKind::wall, std::nullopt};
    DiagnosticsOptions diag;
    diag.enabled = true;
    auto traj = simulate(rest_state(grid, 1.0), grid, n3g2, bc, {0.4, 1e-10, 1e-12},
                         0.05, {}, diag);
    for (auto [t, v] : energy_balance(traj.series, n3g2)) CHECK(v == 0.0);
    CHECK_THROWS_AS(energy_balance(traj.series, FluidParams{1, 1, 1, 1, 3}), Error);
}

TEST_CASE("dissipation accumulation is linear in the viscosity coefficients") {
    RadialGrid grid{0.0, 1.0, 80};
    State s = field_state(
        grid, [](double r) { return 1.0 + 0.2 * r; },
        [](double r) { return r * (1.0 - r); });
    FluidParams small{2, 1, 0.1, 0.1, 3};
    FluidParams large{2, 1, 0.2, 0.2, 3};
    double d_small = dissipation_rate(s, grid, small);
    double d_large = dissipation_rate(s, grid, large);
    CHECK(d_large == doctest::Approx(2.0 * d_small).epsilon(1e-12));
    CHECK(d_small > 0.0);
}

TEST_CASE("isothermal balance requires gamma = 1") {
    RadialGrid grid{0.0, 1.0, 40};
    BoundaryCondition bc{BcKind::axis, BcKind::wall, std::nullopt};
    DiagnosticsOptions diag;
    diag.enabled = true;
    auto traj = simulate(rest_state(grid, 1.0), grid, n3g2, bc, {0.4, 1e-10, 1e-12},
                         0.02, {}, diag);
    CHECK_THROWS_AS(isothermal_balance(traj.series, n3g2), Error);

    FluidParams iso{1, 1, 1, 1, 3};
    auto traj1 = simulate(rest_state(grid, 1.0), grid, iso, bc, {0.4, 1e-10, 1e-12},
                          0.02, {}, diag);
    auto bal = isothermal_balance(traj1.series, iso);
    for (auto [t, v] : bal.residual) CHECK(v == 0.0);
    for (auto [t, v] : bal.slack) CHECK(v >= 0.0);
}

TEST_CASE("isothermal identity residual shrinks under refinement") {
    FluidParams iso{1, 1, 0.05, 0.05, 3};
    auto residual_at = [&](int cells) {
        RadialGrid grid{0.0, 1.0, cells};
        BoundaryCondition bc{BcKind::axis, BcKind::wall, std::nullopt};
        DiagnosticsOptions diag;
        diag.enabled = true;
        auto traj = simulate(gaussian_bump_state(grid, {1.0, 0.5, 0.5, 0.1}), grid, iso,
                             bc, {0.4, 1e-10, 1e-12}, 0.15, {}, diag);
        double worst = 0.0;
        for (auto [t, v] : isothermal_balance(traj.series, iso).residual) {
            worst = std::max(worst, std::abs(v));
        }
        return worst;
    };
    double e1 = residual_at(50);
    double e2 = residual_at(100);
    CHECK(e1 / e2 >= 1.8);
}

TEST_CASE("rate fit recovers a planted power law") {
    Channel planted;
    for (int i = 0; i < 32; ++i) {
        double t = 0.9 * i / 31.0;
        planted.emplace_back(t, 2.0 / std::sqrt(1.0 - t));
    }
    RateFit fit = density_rate_fit(planted, 0.0, 0.9);
    CHECK(std::abs(fit.kappa_hat - 0.5) <= 0.01);
    CHECK(std::abs(fit.t_hat - 1.0) <= 0.001);
    CHECK(std::abs(fit.m_hat - 2.0) <= 0.01);
    CHECK(fit.r_squared >= 0.999999);
    CHECK(fit.samples == 32);
}

TEST_CASE("rate fit recovers planted exponents across the kappa range") {
    for (double kappa : {0.1, 0.5, 1.0, 2.0, 3.0}) {
        for (double T : {1.0, 2.5}) {
            Channel planted;
            for (int i = 0; i < 48; ++i) {
                double t = 0.85 * T * i / 47.0;
                planted.emplace_back(t, 1.7 * std::pow(T - t, -kappa));
            }
            RateFit fit = density_rate_fit(planted, 0.0, 0.85 * T);
            CHECK(std::abs(fit.kappa_hat - kappa) <= 0.02 * kappa);
            CHECK(std::abs(fit.t_hat - T) <= 0.02 * T);
        }
    }
}

TEST_CASE("degenerate channels are rejected by the fit") {
    Channel constant;
    for (int i = 0; i < 32; ++i) constant.emplace_back(0.1 * i, 1.0);
    try {
        density_rate_fit(constant, 0.0, 3.2);
        FAIL("expected FitDegenerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::fit_degenerate);
    }

    Channel tiny;
    for (int i = 0; i < 5; ++i) tiny.emplace_back(0.1 * i, std::exp(i));
    CHECK_THROWS_AS(density_rate_fit(tiny, 0.0, 1.0), Error);
}

TEST_CASE("channels enforce increasing time") {
    DiagnosticSeries series;
    series.append("x", 0.0, 1.0);
    series.append("x", 0.5, 2.0);
    CHECK_THROWS_AS(series.append("x", 0.5, 3.0), Error);
    CHECK(series.at("x").size() == 2);
    CHECK_THROWS_AS(series.at("missing"), Error);
    CHECK(series.has("x"));
}
