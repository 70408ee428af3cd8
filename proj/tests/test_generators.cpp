// Oracles: closed-form differentiation of the Gaussian-bump test functions
// for the symbol applications; the algebra and covariance checks certify
// themselves against exact relations (expected residual is differentiation
// round-off); the discrete spectrum is certified by Richardson-style grid
// and domain enlargement inside ns_spectrum.
#include <cmath>
#include <complex>
#include <doctest.h>

#include "cmera/generators.hpp"
#include "test_util.hpp"

using namespace cmera;
using cplx = std::complex<double>;

namespace {

const cplx I{0.0, 1.0};

// Standard zoo on patches [0.5, 9]: an even bump, a one-sided antisymmetric
// bump, and an oscillatory complex envelope.  All vanish to < 1e-10 of their
// peak at the patch edges.
cplx bump_even(double k) {
    const double z = (std::abs(k) - 3.2) / 0.55;
    return {std::exp(-z * z), 0.0};
}
cplx bump_onesided(double k) {
    const double z = (k - 3.0) / 0.48;
    return {z * std::exp(-z * z), 0.0};
}
cplx bump_osc(double k) {
    const double z = (std::abs(k) - 4.5) / 0.7;
    const double e = std::exp(-z * z);
    return {std::cos(2.0 * k) * e, std::sin(k) * e};
}

constexpr double kLo = 0.5, kHi = 9.0;

double max_dev(const test_function& got, const std::vector<cplx>& want) {
    double m = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i)
        m = std::max(m, std::abs(got.f[i] - want[i]));
    return m;
}

}  // namespace

TEST_CASE("generator symbols: construction flags and multiplication action") {
    const auto sh = make_symbol(generator_name::h);
    const auto sp = make_symbol(generator_name::p);
    const auto sb = make_symbol(generator_name::b);
    const auto sd = make_symbol(generator_name::d);
    const auto s1 = make_symbol(generator_name::k1);
    const auto s2 = make_symbol(generator_name::k2);
    CHECK(sh.order == 0);
    CHECK(sp.order == 0);
    CHECK(sb.order == 1);
    CHECK(sd.order == 1);
    CHECK(s1.order == 2);
    CHECK(s2.order == 2);
    CHECK(sb.sign_structure);
    CHECK(s1.sign_structure);
    CHECK(!sd.sign_structure);
    CHECK(!s2.sign_structure);
    CHECK(!sd.cutoff.has_value());

    // H and P act by multiplication: |k| f and k f pointwise.
    const test_function f = make_test_function(bump_even, kLo, kHi, 129);
    const test_function hf = apply_symbol(sh, f);
    const test_function pf = apply_symbol(sp, f);
    for (std::size_t i = 0; i < f.k.size(); ++i) {
        CHECK(std::abs(hf.f[i] - std::abs(f.k[i]) * f.f[i]) == 0.0);
        CHECK(std::abs(pf.f[i] - f.k[i] * f.f[i]) == 0.0);
    }

    // the regulated symbol over the cutoff modes is the same operator
    const auto shc = make_symbol(generator_name::h, make_analytic_profile());
    CHECK(shc.cutoff.has_value());
    for (double k : {-3.0, 0.7, 5.0})
        CHECK(shc.coeff[0](k) == sh.coeff[0](k));
}

TEST_CASE("test function plumbing: normalization, validation, grids") {
    const test_function f = make_test_function(bump_even, kLo, kHi, 97);
    CHECK(f.k.size() == 2 * 97);
    CHECK(f.f.size() == 2 * 97);
    double top = 0.0;
    for (const cplx& v : f.f) top = std::max(top, std::abs(v));
    CHECK(top == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.k.front() == -kHi);
    CHECK(f.k[96] == -kLo);
    CHECK(f.k[97] == kLo);
    CHECK(f.k.back() == kHi);
    // ascending overall
    for (std::size_t i = 1; i < f.k.size(); ++i) CHECK(f.k[i] > f.k[i - 1]);

    CHECK_THROWS_AS((void)make_test_function(bump_even, -1.0, 9.0, 97),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)make_test_function(bump_even, 2.0, 1.0, 97),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)make_test_function(bump_even, 0.5, 9.0, 8),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        (void)make_test_function([](double) { return cplx{}; }, 0.5, 9.0, 97),
        std::invalid_argument);
    const test_function g = make_test_function(bump_osc, kLo, kHi, 97);
    CHECK_THROWS_AS(
        (void)lin_comb(1.0, f, 1.0, make_test_function(bump_osc, kLo, 8.0, 97)),
        std::invalid_argument);
    (void)lin_comb(1.0, f, 1.0, g);  // shared grid: fine
}

TEST_CASE("apply_symbol against closed-form differentiation") {
    const test_function f = make_test_function(bump_even, kLo, kHi, 129);

    // D f = i (k f' + f/2) with f = exp(-z^2), z = (|k| - 3.2)/0.55
    {
        const test_function df = apply_symbol(make_symbol(generator_name::d), f);
        std::vector<cplx> want(f.k.size());
        for (std::size_t i = 0; i < f.k.size(); ++i) {
            const double k = f.k[i], s = k < 0 ? -1.0 : 1.0;
            const double z = (std::abs(k) - 3.2) / 0.55;
            const double fv = f.f[i].real();
            const double fp = -2.0 * z / 0.55 * s * fv;
            want[i] = I * (k * fp + 0.5 * fv);
        }
        CHECK(max_dev(df, want) < 1e-10);
    }

    // B f = i sgn(k) (k f' + f/2), same bump
    {
        const test_function bf = apply_symbol(make_symbol(generator_name::b), f);
        std::vector<cplx> want(f.k.size());
        for (std::size_t i = 0; i < f.k.size(); ++i) {
            const double k = f.k[i], s = k < 0 ? -1.0 : 1.0;
            const double z = (std::abs(k) - 3.2) / 0.55;
            const double fv = f.f[i].real();
            const double fp = -2.0 * z / 0.55 * s * fv;
            want[i] = I * s * (k * fp + 0.5 * fv);
        }
        CHECK(max_dev(bf, want) < 1e-10);
    }

    // K2 f = -(k f'' + f' - f/(4k)) on the one-sided bump; the closed form
    // is rescaled by the same max-sample normalizer the constructor applied
    {
        const test_function g = make_test_function(bump_onesided, kLo, kHi, 129);
        double norm = 0.0;
        for (double k : g.k) norm = std::max(norm, std::abs(bump_onesided(k)));
        const test_function kg = apply_symbol(make_symbol(generator_name::k2), g);
        std::vector<cplx> want(g.k.size());
        for (std::size_t i = 0; i < g.k.size(); ++i) {
            const double k = g.k[i], w = 0.48;
            const double z = (k - 3.0) / w;
            const double e = std::exp(-z * z) / norm;
            const double fv = z * e;
            const double fp = (1.0 - 2.0 * z * z) * e / w;
            const double fpp = (4.0 * z * z * z - 6.0 * z) * e / (w * w);
            want[i] = -(k * fpp + fp - fv / (4.0 * k));
        }
        CHECK(max_dev(kg, want) < 1e-9);
    }
}

TEST_CASE("apply_symbol linearity and domain guards") {
    const test_function f = make_test_function(bump_even, kLo, kHi, 129);
    const test_function g = make_test_function(bump_osc, kLo, kHi, 129);
    const cplx a{0.7, -1.3}, b{-0.2, 0.45};
    for (generator_name nm : {generator_name::d, generator_name::k2}) {
        const auto s = make_symbol(nm);
        const test_function lhs = apply_symbol(s, lin_comb(a, f, b, g));
        const test_function rhs =
            lin_comb(a, apply_symbol(s, f), b, apply_symbol(s, g));
        CHECK(max_dev(lhs, rhs.f) < 5e-12);
    }

    // support reaching the inner edge (where 1/(4k) and sgn(k) live)
    const test_function bad = make_test_function(
        [](double k) {
            const double z = (std::abs(k) - 1.2) / 0.35;
            return cplx(std::exp(-z * z), 0.0);
        },
        kLo, kHi, 129);
    CHECK_THROWS_AS((void)apply_symbol(make_symbol(generator_name::d), bad),
                    std::domain_error);

    // the entangler is pure pair creation: no one-particle action
    CHECK_THROWS_AS(
        (void)apply_symbol(make_symbol(generator_name::k_entangler), f),
        std::domain_error);

    // field-basis symbols act on channel pairs, not single test functions
    const auto fld = symbol_conjugate(make_symbol(generator_name::d),
                                      make_analytic_profile());
    CHECK_THROWS_AS((void)apply_symbol(fld, f), std::domain_error);
}

TEST_CASE("commutator algebra: all six relations on three test functions") {
    const test_function f1 = make_test_function(bump_even, kLo, kHi, 129);
    const test_function f2 = make_test_function(bump_onesided, kLo, kHi, 129);
    const test_function f3 = make_test_function(bump_osc, kLo, kHi, 129);
    for (const test_function* f : {&f1, &f2, &f3}) {
        const auto checks = verify_commutation_relations(*f);
        CHECK(checks.size() == 6);
        for (const auto& c : checks) CHECK(c.residual < 1e-8);
        // the two multiplication operators commute to round-off
        CHECK(checks[0].relation == "[H,P] = 0");
        CHECK(checks[0].residual < 1e-12);
        CHECK(checks[1].residual < 1e-12);  // [B,D] = 0
    }
}

TEST_CASE("commutator antisymmetry and under-resolution guard") {
    const test_function f = make_test_function(bump_even, kLo, kHi, 129);
    const auto sb = make_symbol(generator_name::b);
    const auto sh = make_symbol(generator_name::h);
    const auto sp = make_symbol(generator_name::p);
    // [B,H] = iP  versus  [H,B] = -iP: bit-identical residuals
    const double r1 = commutator_residual(sb, sh, {{I, sp}}, f);
    const double r2 = commutator_residual(sh, sb, {{-I, sp}}, f);
    CHECK(r1 == r2);

    // a coarse grid cannot support the spectral differentiation
    const test_function coarse = make_test_function(bump_even, kLo, kHi, 49);
    CHECK_THROWS_AS((void)commutator_residual(sb, sh, {{I, sp}}, coarse),
                    numerics_error);
}

TEST_CASE("constraint obstruction: analytic, sharp, and mismatched pairs") {
    std::vector<double> grid;
    for (int i = 0; i < 400; ++i)
        grid.push_back(1e-3 * std::pow(50.0 / 1e-3, i / 399.0));

    // analytic pair: k alpha' / (2 alpha) = g holds to round-off
    const entangler_profile smooth;
    CHECK(dlambda_covariance_residual(make_analytic_profile(), smooth, grid) <
          1e-10);

    // both signs of k and a rescaled cutoff
    std::vector<double> grid2;
    for (double k : grid) {
        grid2.push_back(-2.5 * k);
        grid2.push_back(2.5 * k);
    }
    entangler_profile smooth25;
    smooth25.lambda = 2.5;
    CHECK(dlambda_covariance_residual(make_analytic_profile(2.5), smooth25,
                                      grid2) < 1e-10);

    // sharp pair: exact on both branches (grid avoids |k| = Lambda)
    entangler_profile step;
    step.variant = entangler_variant::sharp;
    CHECK(dlambda_covariance_residual(make_sharp_profile(), step, grid) == 0.0);

    // mismatched pair: alpha = |k| against the smooth entangler leaves
    // |1/2 - g(k)|, maximal at large k where g dies
    const double mis =
        dlambda_covariance_residual(make_cft_profile(), smooth, grid);
    CHECK(mis == doctest::Approx(0.5).epsilon(1e-6));

    CHECK_THROWS_AS(
        (void)dlambda_covariance_residual(make_analytic_profile(), smooth, {}),
        std::invalid_argument);
    CHECK_THROWS_AS((void)dlambda_covariance_residual(make_analytic_profile(),
                                                      smooth, {0.0}),
                    std::invalid_argument);
}

TEST_CASE("scaling covariance: dimension 1, spin +1/-1 at symbol level") {
    for (const constraint_profile& prof :
         {make_analytic_profile(), make_sharp_profile(),
          make_analytic_profile(2.5)}) {
        const auto dd = scaling_covariance_check(scaling_operator::dphi,
                                                 scaling_generator::dilation, prof);
        const auto db = scaling_covariance_check(scaling_operator::dphi,
                                                 scaling_generator::boost, prof);
        const auto bd = scaling_covariance_check(scaling_operator::dbar_phi,
                                                 scaling_generator::dilation, prof);
        const auto bb = scaling_covariance_check(scaling_operator::dbar_phi,
                                                 scaling_generator::boost, prof);
        CHECK(dd.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(db.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bd.eigenvalue == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(bb.eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
        for (const auto& c : {dd, db, bd, bb}) CHECK(c.residual < 1e-8);
        // the boost eigenvalue flips chirality; the dilation one does not
        CHECK(db.eigenvalue * bb.eigenvalue < 0.0);
        CHECK(dd.eigenvalue * bd.eigenvalue > 0.0);
    }
}

TEST_CASE("discrete spectrum of (H + K1)/2: integers, gaps, invariance") {
    const auto ev = ns_spectrum(make_analytic_profile(), 8);
    REQUIRE(ev.size() == 8);
    CHECK(std::abs(ev[0] - 1.0) < 1e-4);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        CHECK(ev[i] > 0.0);
        CHECK(std::abs(ev[i] - double(i + 1)) < 1e-3);
        if (i > 0) {
            CHECK(ev[i] > ev[i - 1]);
            CHECK(std::abs(ev[i] - ev[i - 1] - 1.0) < 5e-4);
        }
    }
    // the mode-basis symbol is the same for every profile
    const auto ev_sharp = ns_spectrum(make_sharp_profile(), 8);
    for (std::size_t i = 0; i < ev.size(); ++i) CHECK(ev[i] == ev_sharp[i]);

    CHECK_THROWS_AS((void)ns_spectrum(make_analytic_profile(), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ns_spectrum(make_analytic_profile(), 64),
                    std::invalid_argument);
}

TEST_CASE("field-basis conjugation: translation survives, dilatation shifts") {
    const constraint_profile prof = make_analytic_profile();
    const constraint_profile flat = make_cft_profile();

    // P: the cross blocks are +- i k / 2 independent of the profile -- the
    // channel weights cancel -- and the diagonal blocks are odd in k, so
    // they drop out of the (even-kernel) bilinear
    const auto cp = symbol_conjugate(make_symbol(generator_name::p), prof);
    const auto cp0 = symbol_conjugate(make_symbol(generator_name::p), flat);
    for (double k : {-4.0, -1.0, 0.6, 2.0, 7.5}) {
        CHECK(std::abs(cp.block[0][1][0](k) - I * (0.5 * k)) < 1e-15 * std::abs(k));
        CHECK(std::abs(cp.block[1][0][0](k) + I * (0.5 * k)) < 1e-15 * std::abs(k));
        CHECK(std::abs(cp.block[0][1][0](k) - cp0.block[0][1][0](k)) <
              1e-15 * std::abs(k));
        CHECK(std::abs(cp.block[0][0][0](k) + cp.block[0][0][0](-k)) <
              1e-15 * std::abs(cp.block[0][0][0](k)));
    }
    CHECK(cp.basis == symbol_basis::field);
    CHECK(cp.cutoff.has_value());

    // H over the massless profile: the standard quadratic form
    // (k^2/2, 1/2) on the diagonal, cross blocks an antisymmetric pair
    const auto ch = symbol_conjugate(make_symbol(generator_name::h), flat);
    for (double k : {-3.0, 0.8, 5.0}) {
        CHECK(std::abs(ch.block[0][0][0](k) - 0.5 * k * k) < 1e-15 * k * k);
        CHECK(std::abs(ch.block[1][1][0](k) - 0.5) < 1e-15);
        CHECK(std::abs(ch.block[0][1][0](k) + ch.block[1][0][0](k)) < 1e-15);
    }

    // D over the entangled profile: diagonal parts pick up -+ g(k) around
    // the scale term, the signature of the entangler inside the flowed
    // dilatation
    const auto cd = symbol_conjugate(make_symbol(generator_name::d), prof);
    for (double k : {-5.0, -0.9, 0.45, 1.7, 6.0}) {
        const double al = prof(k);
        const double g = entangler_g_smooth(std::abs(k), 1.0);
        const cplx phi_shift = cd.block[0][0][0](k) / (I * 0.5 * al) - 0.5;
        const cplx pi_shift = cd.block[1][1][0](k) * (2.0 * al) / I - 0.5;
        CHECK(std::abs(phi_shift - g) < 1e-12);
        CHECK(std::abs(pi_shift + g) < 1e-12);
        // first-order coefficients carry the plain scale action
        CHECK(std::abs(cd.block[0][0][1](k) - I * (0.5 * al * k)) <
              1e-14 * std::abs(al * k));
        CHECK(std::abs(cd.block[1][1][1](k) - I * (0.5 * k / al)) <
              1e-14 * std::abs(k / al));
    }

    // the scale part L conjugates identically to D
    const auto cl = symbol_conjugate(make_symbol(generator_name::l), prof);
    for (double k : {-2.0, 1.3})
        for (int r = 0; r < 2; ++r)
            for (int n = 0; n < 2; ++n)
                CHECK(std::abs(cl.block[r][r][n](k) - cd.block[r][r][n](k)) == 0.0);

    CHECK_THROWS_AS((void)symbol_conjugate(cd, prof), std::domain_error);
    CHECK_THROWS_AS((void)symbol_conjugate(
                        make_symbol(generator_name::k_entangler), prof),
                    std::domain_error);
}

TEST_CASE("entangler symbol carries the pair-creation coefficient") {
    const auto ke = make_symbol(generator_name::k_entangler);
    CHECK(ke.anomalous);
    for (double k : {-2.0, 0.3, 1.0, 4.0}) {
        const double want = 0.5 * std::exp(-k * k / sigma_v<double>);
        CHECK(std::abs(ke.coeff[0](k) - want) < 1e-16);
    }
    // a sharp profile swaps in the step variant
    const auto kes =
        make_symbol(generator_name::k_entangler, make_sharp_profile());
    CHECK(kes.coeff[0](0.5) == cplx(0.5, 0.0));
    CHECK(kes.coeff[0](1.5) == cplx(0.0, 0.0));
}
