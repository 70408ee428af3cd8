// Entangler and constraint profiles.  Decimal references below: mpmath at 50
// digits evaluating exp(Ei(-k^2/sigma)/2), sigma = e^gamma, frozen here.
#include "doctest.h"

#include <cmath>
#include <vector>

#include "cmera/profiles.hpp"
#include "test_util.hpp"

using cmera::extended;

TEST_CASE("entangler profile g(k)") {
    cmera::entangler_profile smooth;  // lambda = 1
    CHECK(cmera::entangler_g(smooth, 0.0) == 0.5);
    CHECK(rel_err(cmera::entangler_g(smooth, 1.0),
                  0.5 * std::exp(-1.0 / 1.7810724179901979852)) < 1e-15);
    CHECK(cmera::entangler_g(smooth, -2.0) == cmera::entangler_g(smooth, 2.0));

    cmera::entangler_profile sharp;
    sharp.variant = cmera::entangler_variant::sharp;
    CHECK(cmera::entangler_g(sharp, 0.3) == 0.5);
    CHECK(cmera::entangler_g(sharp, 1.0) == 0.5);  // step is inclusive at |k| = Lambda
    CHECK(cmera::entangler_g(sharp, 1.0 + 1e-12) == 0.0);
}

TEST_CASE("analytic constraint profile alpha(k)") {
    CHECK(cmera::alpha_analytic(0.0) == 0.0);
    CHECK(rel_err(cmera::alpha_analytic(1e-4), "9.999999971927025900464929233932673886948e-5") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(0.01), "0.009999719278138938695565131258139999631715") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(0.5), "0.4672262462065569154576687895237425555061") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(1.0), "0.7821043235811453627610428197560400052459") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(2.0), "0.9826730540158212013124587746519247221505") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(5.0), "0.9999999732345127386911721154231402253866") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(10.0), "0.9999999999999999999999999963839230770375") < 5e-15);
    CHECK(rel_err(cmera::alpha_analytic(extended(1)),
                  "0.7821043235811453627610428197560400052459") < 1e-33);

    // IR slope is exactly 1 (alpha = k - k^3/(2 sigma) + ...), UV limit Lambda.
    CHECK(std::abs(cmera::alpha_analytic(1e-4) / 1e-4 - 1.0) < 1e-8);
    CHECK(cmera::alpha_analytic(10.0) <= 1.0);
    CHECK(1.0 - cmera::alpha_analytic(10.0) < 1e-6);
    // Next correction enters at relative order (k^2/sigma)^2 / 4 ~ 6e-8 here.
    const double k = 0.03;
    CHECK(rel_err(cmera::alpha_analytic(k),
                  k * (1.0 - k * k / (2.0 * 1.7810724179901979852))) < 2e-7);
}

TEST_CASE("alpha is monotone, bounded by Lambda, scale covariant") {
    // Strictly increasing until the value saturates to 1 in double precision
    // (1 - alpha < eps beyond k ~ 7), never decreasing, never above Lambda.
    double prev = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double k = 1e-3 * std::pow(1e4, i / 400.0);
        const double a = cmera::alpha_analytic(k);
        if (prev < 1.0) CHECK(a > prev);
        CHECK(a >= prev);
        CHECK(a <= 1.0);
        prev = a;
    }
    // alpha_Lambda(k) = Lambda * alpha_1(k / Lambda)
    const double lam = 3.7;
    for (double k : {1e-3, 0.2, 1.9, 8.0, 55.0}) {
        CHECK(rel_err(cmera::alpha_analytic(k, lam),
                      lam * cmera::alpha_analytic(k / lam)) < 3e-15);
    }
}

TEST_CASE("derivative of alpha matches the defining relation") {
    // alpha'(k) = 2 g(k) alpha(k) / k; cross-check against a 4th-order central
    // difference of the closed form.  Beyond k ~ 3 the derivative is
    // exponentially small and differencing drowns in rounding, so stop at 2.5.
    for (double k : {0.05, 0.4, 1.0, 2.5}) {
        const double h = k * 1e-4;
        const double fd = (-cmera::alpha_analytic(k + 2 * h) + 8 * cmera::alpha_analytic(k + h) -
                           8 * cmera::alpha_analytic(k - h) + cmera::alpha_analytic(k - 2 * h)) /
                          (12 * h);
        CHECK(rel_err(cmera::alpha_analytic_prime(k), fd) < 1e-10);
    }
    CHECK(cmera::alpha_analytic_prime(0.0) == 1.0);
}

TEST_CASE("ODE solution reproduces the closed form") {
    CHECK(cmera::alpha_ode_max_rel_deviation(1e-3, 10.0, 80) < 1e-8);
    // Different cutoff, same equation after rescaling.
    CHECK(cmera::alpha_ode_max_rel_deviation(2e-3, 20.0, 40, 2.0) < 1e-8);
}

TEST_CASE("sharp-entangler ODE lands on min(|k|, Lambda)") {
    cmera::entangler_profile ent;
    ent.variant = cmera::entangler_variant::sharp;
    std::vector<double> ks;
    for (int i = 0; i <= 60; ++i) ks.push_back(1e-2 * std::pow(1e3, i / 60.0));
    // Anchor on the IR branch where alpha = k exactly.
    const auto p = cmera::alpha_ode_solve(ent, ks, 1e-2, 1e-2);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(rel_err(p.grid_alpha[i], cmera::sharp_alpha(ks[i])) < 1e-9);
    }
}

TEST_CASE("solved-profile interpolation and error estimates") {
    cmera::entangler_profile ent;
    std::vector<double> ks;
    for (int i = 0; i <= 240; ++i) ks.push_back(1e-3 * std::pow(1e4, i / 240.0));
    const auto p = cmera::alpha_ode_solve(ent, ks, 1e-3, cmera::alpha_analytic(1e-3));
    for (double e : p.grid_err) CHECK(e < 1e-10);
    // Node queries hit the stored values; off-node queries interpolate in
    // log-log with error ~ (grid spacing)^2 * curvature ~ 1e-4 at this density.
    CHECK(p(ks[100]) == p.grid_alpha[100]);
    for (double k : {0.0123, 0.37, 1.7, 4.2}) {
        CHECK(rel_err(p(k), cmera::alpha_analytic(k)) < 5e-4);
        CHECK(p(-k) == p(k));
    }
}

TEST_CASE("fixed-point, scale-invariant, and flow-snapshot profiles") {
    const auto sharp = cmera::make_sharp_profile(2.0);
    CHECK(sharp(0.5) == 0.5);
    CHECK(sharp(-0.5) == 0.5);
    CHECK(sharp(2.0) == 2.0);
    CHECK(sharp(7.0) == 2.0);

    const auto cft = cmera::make_cft_profile();
    CHECK(cft(0.25) == 0.25);
    CHECK(cft(-9.0) == 9.0);

    // s = 0 is the unentangled product state (constant Lambda); s -> -inf
    // approaches the sharp fixed point from above.
    const auto start = cmera::make_flow_snapshot_profile(0.0);
    CHECK(start(1e-6) == 1.0);
    CHECK(start(3.0) == 1.0);
    const auto late = cmera::make_flow_snapshot_profile(-30.0);
    for (double k : {std::exp(-29.0), 1e-9, 1e-3, 0.5, 1.0, 4.0}) {
        CHECK(rel_err(late(k), cmera::sharp_alpha(k)) < 1e-12);
        CHECK(late(k) >= cmera::sharp_alpha(k));
    }
    CHECK(cmera::make_flow_snapshot_profile(-2.0)(1e-9) == std::exp(-2.0));
    CHECK_THROWS(cmera::make_flow_snapshot_profile(0.5));
}
