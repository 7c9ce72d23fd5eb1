#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "cnslab/params.hpp"

using namespace cnslab;

namespace {

// the quadratic whose positivity at p - 2 the selection must guarantee
double f_quadratic(double lambda, double mu, double big_r) {
    return 4.0 * mu - (lambda + mu) * big_r * big_r + 4.0 * mu * big_r;
}

}  // namespace

TEST_CASE("validate accepts admissible constants and names violations") {
    CHECK_NOTHROW(validate(FluidParams{2, 1, 1, 1, 3}));
    // n lambda + 2 mu stays positive for mildly negative lambda
    CHECK_NOTHROW(validate(FluidParams{2, 1, 1, -0.5, 3}));  // 3(-0.5) + 2 = 0.5

    CHECK_THROWS_AS(validate(FluidParams{2, 1, 1, -1, 3}), Error);  // 3(-1) + 2 = -1
    CHECK_THROWS_AS(validate(FluidParams{2, 1, 0, 1, 3}), Error);   // mu must be positive
    CHECK_THROWS_AS(validate(FluidParams{0.9, 1, 1, 1, 3}), Error);
    CHECK_THROWS_AS(validate(FluidParams{2, 0, 1, 1, 3}), Error);
    CHECK_THROWS_AS(validate(FluidParams{2, 1, 1, 1, 4}), Error);

    try {
        validate(FluidParams{2, 1, 1, -1, 3});
        FAIL("expected a constraint violation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::constraint_violation);
        CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
}

TEST_CASE("select_p returns 4 below lambda = 2 mu and f(2) = 4 at lambda = mu = 1") {
    CHECK(select_p(1, 1) == 4.0);
    CHECK(f_quadratic(1, 1, 2) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(select_p(-0.5, 1) == 4.0);
    CHECK(select_p(1.99, 1) == 4.0);
}

TEST_CASE("select_p near the feasibility edge uses the interval midpoint") {
    // positive root of f for lambda = 6.5, mu = 1: (4 + sqrt(136)) / 15
    double r_plus = (4.0 + std::sqrt(136.0)) / 15.0;
    CHECK(r_plus == doctest::Approx(1.0441).epsilon(1e-4));
    double expected = 0.5 * (3.0 + 2.0 + r_plus);
    double p = select_p(6.5, 1.0);
    CHECK(p == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p == doctest::Approx(3.0221).epsilon(1e-4));
}

TEST_CASE("select_p rejects lambda >= 7 mu") {
    CHECK_THROWS_AS(select_p(7.0, 1.0), Error);
    try {
        select_p(7.5, 1.0);
        FAIL("expected NoFeasibleP");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::no_feasible_p);
    }
}

TEST_CASE("selected p keeps the quadratic positive across the feasible region") {
    for (double mu : {0.3, 1.0, 2.5}) {
        for (double frac : {-0.6, 0.0, 0.5, 1.9, 2.0, 3.0, 5.0, 6.9, 6.999}) {
            double lambda = frac * mu;
            if (3.0 * lambda + 2.0 * mu <= 0.0) continue;
            double p = select_p(lambda, mu);
            CHECK(p > 3.0);
            CHECK(p < 6.0);
            CHECK(f_quadratic(lambda, mu, p - 2.0) > 0.0);
        }
    }
}

TEST_CASE("kappa_bound evaluates the three-term minimum") {
    CHECK(kappa_bound(2, 4) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(kappa_bound(1, 4) == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
    CHECK(kappa_bound(3, 4) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(kappa_bound(2, 3.0), Error);
    CHECK_THROWS_AS(kappa_bound(2, 6.0), Error);
    CHECK_THROWS_AS(kappa_bound(0.5, 4), Error);
}

TEST_CASE("kappa_bound is non-increasing in gamma and below each term") {
    double prev = kappa_bound(1.0, 4.5);
    for (double g = 1.05; g < 6.0; g += 0.05) {
        double k = kappa_bound(g, 4.5);
        CHECK(k <= prev + 1e-15);
        CHECK(k <= 1.0 / (g + 3.0));
        CHECK(k <= 1.0 / (3.0 * g));
        CHECK(k <= 1.5 / 5.5);
        prev = k;
    }
}

TEST_CASE("delta_of branch values and the seam at gamma = 3/2") {
    CHECK(delta_of(1) == doctest::Approx(3.0 / 5.0).epsilon(1e-15));
    CHECK(delta_of(1.5) == doctest::Approx(7.0 / 11.0).epsilon(1e-15));
    CHECK(delta_of(2) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    // both branches agree at the seam
    double low = (1.5 + 2.0) / (1.5 + 4.0);
    double high = (3.0 * 1.5 - 1.0) / (3.0 * 1.5 + 1.0);
    CHECK(std::abs(low - high) <= 1e-15);
    for (double g = 1.0; g <= 5.0; g += 0.125) {
        double d = delta_of(g);
        CHECK(d > 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("scaling dimensions match the invariance exponents") {
    CHECK(scaling_dimension(Quantity::time, 3) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(scaling_dimension(Quantity::velocity, 1) == 0.0);
    CHECK(scaling_dimension(Quantity::density, 3) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(scaling_dimension(Quantity::space, 2) == 1.0);
}

TEST_CASE("dimensional homogeneity of the continuity equation") {
    // dim(rho_t) = dim(div(rho u)) for every gamma
    for (double g = 1.0; g <= 6.0; g += 0.1) {
        double lhs = scaling_dimension(Quantity::density, g) - scaling_dimension(Quantity::time, g);
        double rhs = scaling_dimension(Quantity::density, g) +
                     scaling_dimension(Quantity::velocity, g) -
                     scaling_dimension(Quantity::space, g);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
    }
}

TEST_CASE("criteria_for bundles the derived constants") {
    auto c = criteria_for(FluidParams{2, 1, 1, 1, 3});
    CHECK(c.p == 4.0);
    CHECK(c.kappa_max == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(c.delta == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
    CHECK(c.kappa_max > 0.0);
    CHECK(c.kappa_max < 1.0);
}
