// Reference values: mpmath at 50 significant digits -- besselk/gamma for the
// closed-form kernel, mp.quad (tanh-sinh) plus the analytic algebraic tail for
// the remainder transforms, and Richardson extrapolation in the regulator for
// the finite-part pairing.
#include <cmath>
#include <doctest.h>

#include "cmera/kernels.hpp"
#include "test_util.hpp"

using namespace cmera;

namespace {
const constraint_profile analytic = make_analytic_profile();
}

TEST_CASE("closed-form singular kernels against frozen references") {
    // mpmath: 2^(3/4) besselk(1/4, xi) / (gamma(1/4) xi^(1/4)) etc.
    CHECK(rel_err(singular_kernel(kernel_kind::phi, 0.001), "30.66680935644230053071075769592891526919") < 2e-14);
    CHECK(rel_err(singular_kernel(kernel_kind::pi, 0.001), "-15810.70674571878612848039376265489975759") < 2e-14);
    CHECK(rel_err(singular_kernel(kernel_kind::phi, 1.0), "0.1998050211742966789478677605687467819844") < 2e-14);
    CHECK(rel_err(singular_kernel(kernel_kind::pi, 1.0), "-0.2502673809228922855621768419957804114037") < 2e-14);
    CHECK(rel_err(singular_kernel(kernel_kind::phi, 5.0), "0.00115157520565269073231603647682464538287") < 2e-13);
    CHECK(rel_err(singular_kernel(kernel_kind::pi, 5.0), "-0.0005639450623898555131169396739589244437642") < 2e-13);
    CHECK_THROWS_AS((void)singular_kernel(kernel_kind::phi, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)singular_kernel(kernel_kind::pi, -1.0), std::domain_error);
}

TEST_CASE("singular kernel short- and long-distance laws") {
    // Short distance: mu_phi -> xi^{-1/2} and mu_pi -> -1/2 xi^{-3/2}; the
    // -1/2 is exact because 2 Gamma(3/4)/Gamma(-1/4) = -1/2.
    const double xi = 1e-3;
    CHECK(std::abs(singular_kernel(kernel_kind::phi, xi) * std::sqrt(xi) - 1.0) < 0.05);
    CHECK(std::abs(singular_kernel(kernel_kind::pi, xi) / (-0.5 * std::pow(xi, -1.5)) - 1.0) < 0.05);

    // Long distance (from K_nu(z) ~ sqrt(pi/2z) e^-z):
    //   mu_phi ~ 2^{1/4} sqrt(pi) e^-xi / (Gamma(1/4) xi^{3/4})
    //   mu_pi  ~ 2^{3/4} sqrt(pi) e^-xi / (Gamma(-1/4) xi^{5/4})
    // At xi = 8 the next 1/z correction puts the true/asymptote ratios at
    // 0.98899 and 1.01864 (mpmath).
    const double z = 8.0;
    const double g14 = 3.6256099082219083119;
    const double gm14 = -4.9016668098607105805;
    const double asym_phi = std::pow(2.0, 0.25) * std::sqrt(M_PI) * std::exp(-z) / (g14 * std::pow(z, 0.75));
    const double asym_pi = std::pow(2.0, 0.75) * std::sqrt(M_PI) * std::exp(-z) / (gm14 * std::pow(z, 1.25));
    CHECK(std::abs(singular_kernel(kernel_kind::phi, z) / asym_phi - 0.98899) < 2e-4);
    CHECK(std::abs(singular_kernel(kernel_kind::pi, z) / asym_pi - 1.01864) < 2e-4);
}

TEST_CASE("momentum symbols: reciprocity, subtraction, remainder decay") {
    for (double q : {0.01, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(std::abs(smearing_symbol(kernel_kind::phi, q) * smearing_symbol(kernel_kind::pi, q) - 1.0) < 1e-14);
        CHECK(std::abs(symbol_subtractor(kernel_kind::phi, q) * symbol_subtractor(kernel_kind::pi, q) - 1.0) < 1e-15);
    }
    // IR: rem ~ (1/4 - 1/(4 sigma)) q^2 for phi, so O(q^2) -> 0.
    CHECK(symbol_remainder(kernel_kind::phi, 0.0) == 0.0);
    CHECK(std::abs(symbol_remainder(kernel_kind::phi, 1e-3)) < 0.12e-6);
    CHECK(std::abs(symbol_remainder(kernel_kind::pi, 1e-3)) < 0.5e-6);
    // UV: remainder matches its algebraic tail series once alpha saturates.
    for (kernel_kind kind : {kernel_kind::phi, kernel_kind::pi}) {
        const double q = 25.0;
        double series = 0.0;
        for (const auto& t : remainder_tail_terms(kind)) series += t.c * std::pow(q, -t.p);
        CHECK(std::abs(symbol_remainder(kind, q) - series) < 1e-12 * std::abs(series) + 1e-18);
    }
}

TEST_CASE("remainder tail coefficients are the binomial series of the subtractor") {
    const auto tphi = remainder_tail_terms(kernel_kind::phi);
    const auto tpi = remainder_tail_terms(kernel_kind::pi);
    REQUIRE(tphi.size() == 8);
    CHECK(tphi[0].c == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tphi[0].p == doctest::Approx(2.5));
    CHECK(tphi[1].c == doctest::Approx(-5.0 / 32.0).epsilon(1e-15));
    CHECK(tphi[1].p == doctest::Approx(4.5));
    CHECK(tpi[0].c == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(tpi[0].p == doctest::Approx(1.5));
    CHECK(tpi[1].c == doctest::Approx(3.0 / 32.0).epsilon(1e-15));
    CHECK(tpi[1].p == doctest::Approx(3.5));
}

TEST_CASE("remainder transform against frozen references") {
    // mpmath: sqrt(2/pi) [ quad(cos(q xi) rem(q), 0..40) + tail ], 50 digits.
    struct row {
        kernel_kind kind;
        double xi;
        const char* want;
    };
    const row rows[] = {
        {kernel_kind::phi, 0.0, "0.0924272234133119786044338060021895483"},
        {kernel_kind::pi, 0.0, "-0.349685052058516067869841195061909769"},
        {kernel_kind::phi, 1.0, "-0.00343182213340838113273398701037846416"},
        {kernel_kind::pi, 1.0, "0.0317101655157884397639862269287864253"},
        {kernel_kind::phi, 6.0, "-0.000368889110416982377108848708388610839"},
        {kernel_kind::pi, 6.0, "0.000164258538952071299761424194577200978"},
    };
    for (const auto& r : rows) {
        const auto got = remainder_ft(r.kind, r.xi, analytic);
        const double want = std::strtod(r.want, nullptr);
        CHECK(std::abs(got.value - want) < 1e-12 + 1e-11 * std::abs(want));
        CHECK(got.error < 1e-9);
    }
    // evenness is structural; the derivative must be odd
    const auto dp = remainder_ft_deriv(kernel_kind::phi, 1.5, analytic);
    const auto dm = remainder_ft_deriv(kernel_kind::phi, -1.5, analytic);
    CHECK(dp.value == -dm.value);
    CHECK(remainder_ft_deriv(kernel_kind::pi, 0.0, analytic).value == 0.0);
}

TEST_CASE("extended-precision remainder transform agrees with double core") {
    for (double xi : {0.0, 1.0, 6.0}) {
        const double d = remainder_ft(kernel_kind::phi, xi, analytic).value;
        const double e = remainder_ft_extended(kernel_kind::phi, xi);
        CHECK(std::abs(d - e) < 5e-14);
    }
    // far out only the extended core survives cancellation:
    // total = mu1 + mu2 at xi = 12, mpmath reference
    const double tot12 = singular_kernel(kernel_kind::phi, 12.0) + remainder_ft_extended(kernel_kind::phi, 12.0);
    CHECK(rel_err(tot12, "1.62250653181075140506118640614e-13") < 1e-6);
}

TEST_CASE("total kernel against frozen references") {
    // mpmath, singular + remainder transform at 50 digits
    const auto p5 = total_kernel(kernel_kind::phi, 5.0, analytic);
    CHECK(rel_err(p5.total, "0.0000200276355342454139605323464589") < 1e-8);
    CHECK(p5.sign == 1);
    CHECK(p5.lambda_x == 5.0);
    const auto p8 = total_kernel(kernel_kind::phi, 8.0, analytic);
    CHECK(rel_err(p8.total, "0.00000000864624710871377511772580376355") < 2e-6);
    const auto q5 = total_kernel(kernel_kind::pi, 5.0, analytic);
    CHECK(rel_err(q5.total, "0.000000995131791707541344530555806652") < 2e-7);
    CHECK_THROWS_AS((void)total_kernel(kernel_kind::phi, 0.0, analytic), std::domain_error);
}

TEST_CASE("kernel table: positivity of mu_phi, oscillation of mu_pi, error gate") {
    std::vector<double> grid;
    for (double x = 2.0; x <= 12.0 + 1e-9; x += 0.05) grid.push_back(x);
    const auto tab_phi = kernel_table(kernel_kind::phi, grid, analytic, 1e-8);
    for (const auto& s : tab_phi) CHECK(s.total > 0.0);

    const auto tab_pi = kernel_table(kernel_kind::pi, grid, analytic, 1e-8);
    int changes = 0;
    double first_change = 0.0;
    for (std::size_t i = 1; i < tab_pi.size(); ++i)
        if (tab_pi[i].sign != 0 && tab_pi[i - 1].sign != 0 && tab_pi[i].sign != tab_pi[i - 1].sign) {
            ++changes;
            if (changes == 1) first_change = tab_pi[i].x;
        }
    CHECK(changes == 4);  // mpmath scan: zeros near 2.581, 5.216, 8.032, 10.967
    CHECK(first_change > 2.52);
    CHECK(first_change < 2.64);

    CHECK_THROWS_AS((void)kernel_table(kernel_kind::phi, {1.0}, analytic, 1e-22), numerics_error);
}

TEST_CASE("kernel derivative matches finite differences of the kernel") {
    for (double xi : {1.0, 3.0}) {
        const double h = 1e-3;
        auto mu = [&](double z) { return total_kernel(kernel_kind::phi, z, analytic).total; };
        const double fd =
            (-mu(xi + 2 * h) + 8 * mu(xi + h) - 8 * mu(xi - h) + mu(xi - 2 * h)) / (12 * h);
        CHECK(std::abs(total_kernel_deriv(kernel_kind::phi, xi, analytic) - fd) < 1e-9);
    }
    auto mupi = [&](double z) { return total_kernel(kernel_kind::pi, z, analytic).total; };
    const double h = 1e-3;
    const double fd =
        (-mupi(1.0 + 2 * h) + 8 * mupi(1.0 + h) - 8 * mupi(1.0 - h) + mupi(1.0 - 2 * h)) / (12 * h);
    CHECK(std::abs(total_kernel_deriv(kernel_kind::pi, 1.0, analytic) - fd) < 1e-9);
}

TEST_CASE("scale-invariant profile: transform rejected, delta pairing reconstructed") {
    const constraint_profile cft = make_cft_profile();
    // alpha = |k| leaves a non-decaying remainder; the pointwise transform is
    // distributional and must be refused.
    CHECK_THROWS_AS((void)remainder_ft(kernel_kind::phi, 1.0, cft), std::invalid_argument);
    CHECK_THROWS_AS((void)remainder_ft(kernel_kind::pi, 1.0, cft), std::invalid_argument);

    // The pairing still exists: <mu_phi, f> = sqrt(2 pi) f(0) under the
    // symmetric transform convention.  Split as closed-form kernel in real
    // space plus remainder in momentum space (Parseval), f = exp(-x^2):
    //   I1 = 2 int_0^inf mu1_phi(x) f(x) dx          (y = t^2 tames the edge)
    //   I2 = 2 int_0^inf [1 - (1+q^2)^{-1/4}] fhat_sym(q) dq,
    // fhat_sym(q) = exp(-q^2/4)/sqrt(2).
    const auto real_side = [](double t) {
        return 2.0 * t * singular_kernel(kernel_kind::phi, t * t) * std::exp(-t * t * t * t);
    };
    const double i1 = 2.0 * integrate(real_side, 0.0, std::sqrt(60.0), 1e-14, 1e-13);
    const auto mom_side = [](double q) {
        return (1.0 - std::pow(1.0 + q * q, -0.25)) * std::exp(-q * q / 4.0) / std::sqrt(2.0);
    };
    const double i2 = 2.0 * integrate(mom_side, 0.0, 44.0, 1e-14, 1e-13);
    CHECK(std::abs(i1 + i2 - std::sqrt(2.0 * M_PI)) < 1e-8);
}

TEST_CASE("sharp and flow-snapshot profiles transform finitely") {
    const auto s = total_kernel(kernel_kind::phi, 2.0, make_sharp_profile());
    CHECK(std::isfinite(s.total));
    CHECK(s.sign != 0);
    const auto fl = total_kernel(kernel_kind::phi, 2.0, make_flow_snapshot_profile(-0.5));
    CHECK(std::isfinite(fl.total));
}

TEST_CASE("finite-part pairing of the pi kernel") {
    // mpmath oracle via Parseval: <mu1_pi, f> = int (1+k^2)^{1/4} fhat_sym(k) dk
    // (the full symbol pairing minus the remainder piece is regulator-free).
    const auto g1 = [](double x) { return std::exp(-x * x); };
    const auto fit1 = hadamard_pairing(g1, 1.0);
    CHECK(rel_err(fit1.value, "3.119737982510395471016054544498526258706") < 1e-6);
    CHECK(fit1.eps.size() == 17);
    CHECK(fit1.error < 1e-6);

    const auto g2 = [](double x) { return std::exp(-2.0 * x * x); };
    const auto fit2 = hadamard_pairing(g2, 1.0);
    CHECK(rel_err(fit2.value, "3.442441848745691851330825869226171014199") < 1e-6);

    // zero and odd inputs have vanishing pairing
    CHECK(std::abs(hadamard_pairing([](double) { return 0.0; }, 0.0).value) < 1e-14);
    CHECK(std::abs(hadamard_pairing([](double x) { return x * std::exp(-x * x); }, 0.0).value) < 1e-12);

    // cutoff scaling: <mu(2x), f> = (1/2) <mu(x), f(./2)>
    const auto half = [&](double x) { return g1(x / 2.0); };
    const double lhs = hadamard_pairing(g1, 1.0, 2.0).value;
    const double rhs = 0.5 * hadamard_pairing(half, 1.0, 1.0).value;
    CHECK(std::abs(lhs - rhs) < 1e-7 * std::abs(rhs));
}

TEST_CASE("kernel solves its scale-invariance integral equation") {
    const auto res = integral_equation_residual({0.5, 1.0, 2.0, 4.0, 6.0, 8.0});
    REQUIRE(res.size() == 6);
    for (const auto& r : res) {
        INFO("x = ", r.x, " rel = ", r.rel);
        CHECK(r.rel < 1e-6);
        CHECK(std::isfinite(r.term_conv));
    }
}

TEST_CASE("asymptotic decay-law scan (double core, short window)") {
    const auto fit = decay_law_fit(5.0, 8.0, 5, false);
    CHECK(fit.applicable);
    REQUIRE(fit.ratio.size() == 5);
    // measured: ratio 1.2780 at xi=5 falling to 1.2059 at xi=8
    CHECK(fit.ratio_hi < 1.30);
    CHECK(fit.ratio_lo > 1.15);
    CHECK(fit.ratio_drifts_toward_one);
    CHECK(fit.pi_sign_changes >= 1);  // zero of mu_pi near 5.216
    CHECK(fit.fitted_exp_rate > 1.0);  // decays faster than any pure exponential e^-xi

    CHECK_FALSE(decay_law_fit_cft().applicable);
    CHECK_THROWS_AS((void)decay_law_fit(0.5, 8.0, 5, false), std::invalid_argument);
}
