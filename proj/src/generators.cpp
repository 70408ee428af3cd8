// Spacetime symmetry generators at the one-particle symbol level: momentum
// space symbols, spectral application to sampled test functions, commutator
// algebra checks, the constraint obstruction, covariance of the regulated
// chiral fields, the spectrum of (H + K1)/2, and field-basis conjugation.

#include "cmera/generators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cmera {

namespace {

using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};

double sgn(double k) { return k < 0.0 ? -1.0 : 1.0; }

// --------------------------------------------------------------------------
// Chebyshev-Lobatto patches.  Nodes k_j = mid - half cos(pi j / N) ascend in
// k while keeping the standard Chebyshev index order.

std::vector<double> patch_nodes(double a, double b, int points) {
    const int n = points - 1;
    std::vector<double> k(points);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j <= n; ++j)
        k[j] = mid - half * std::cos(pi_v<double> * j / n);
    k.front() = a;
    k.back() = b;
    return k;
}

// Collocation derivative on the mapped nodes (negative-sum diagonal).
Eigen::MatrixXd patch_diff(double a, double b, int points) {
    const int n = points - 1;
    Eigen::MatrixXd d(points, points);
    std::vector<double> x(points), c(points);
    for (int j = 0; j <= n; ++j) {
        x[j] = std::cos(pi_v<double> * j / n);
        c[j] = (j == 0 || j == n) ? 2.0 : 1.0;
    }
    for (int i = 0; i <= n; ++i) {
        double row = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            const double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            d(i, j) = s * c[i] / (c[j] * (x[i] - x[j]));
            row += d(i, j);
        }
        d(i, i) = -row;
    }
    return d * (-2.0 / (b - a));  // d/dk, with k = mid - half x
}

struct patch_view {
    double a, b;
    int offset;
};

std::array<patch_view, 2> patches_of(const test_function& f) {
    return {patch_view{-f.k_max, -f.k_min, 0},
            patch_view{f.k_min, f.k_max, f.points}};
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const cplx& z : v) m = std::max(m, std::abs(z));
    return m;
}

// Samples and spectral derivatives (up to `order`) on one patch.
std::array<std::vector<cplx>, 3> patch_derivatives(const test_function& f,
                                                   const patch_view& p,
                                                   int order) {
    const int m = f.points;
    std::array<std::vector<cplx>, 3> out;
    out[0].assign(f.f.begin() + p.offset, f.f.begin() + p.offset + m);
    if (order == 0) return out;
    const Eigen::MatrixXd d = patch_diff(p.a, p.b, m);
    Eigen::VectorXd re(m), im(m);
    for (int j = 0; j < m; ++j) {
        re[j] = out[0][j].real();
        im[j] = out[0][j].imag();
    }
    for (int n = 1; n <= order; ++n) {
        const Eigen::VectorXd re1 = d * re, im1 = d * im;
        out[n].resize(m);
        for (int j = 0; j < m; ++j) out[n][j] = cplx(re1[j], im1[j]);
        re = re1;
        im = im1;
    }
    return out;
}

// The symbols are singular at k = 0 and spectral differentiation needs clean
// decay at the patch ends, so the three outermost samples at every edge must
// be negligible against the peak.
void check_support(const test_function& f) {
    const double top = max_abs(f.f);
    if (!(top > 0.0))
        throw std::domain_error("apply_symbol: test function is identically zero");
    const double tol = 1e-8 * top;
    const int m = f.points;
    const struct {
        int i0, step;
        const char* where;
    } edges[4] = {{0, 1, "-k_max"},
                  {m - 1, -1, "-k_min"},
                  {m, 1, "+k_min"},
                  {2 * m - 1, -1, "+k_max"}};
    for (const auto& e : edges)
        for (int t = 0; t < 3; ++t) {
            const double mag = std::abs(f.f[e.i0 + t * e.step]);
            if (mag > tol) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "apply_symbol: support violation, |f| = %.2e near the %s "
                              "patch edge (threshold %.2e of the peak)",
                              mag, e.where, tol);
                throw std::domain_error(buf);
            }
        }
}

// Relative size of the trailing Chebyshev coefficients across both patches:
// the under-resolution detector for the commutator checks.
double cheb_tail_ratio(const test_function& f) {
    const int n = f.points - 1;
    double top = 0.0, tail = 0.0;
    for (const auto& p : patches_of(f)) {
        for (int m = 0; m <= n; ++m) {
            cplx a{};
            for (int j = 0; j <= n; ++j) {
                const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
                a += f.f[p.offset + j] / cj * std::cos(pi_v<double> * m * j / n);
            }
            a *= 2.0 / (n * ((m == 0 || m == n) ? 2.0 : 1.0));
            const double mag = std::abs(a);
            top = std::max(top, mag);
            if (m > n - 8) tail = std::max(tail, mag);
        }
    }
    return top > 0.0 ? tail / top : 0.0;
}

generator_symbol build_symbol(generator_name name,
                              const std::optional<constraint_profile>& cutoff) {
    generator_symbol s;
    s.name = name;
    s.cutoff = cutoff;
    switch (name) {
        case generator_name::h:
            s.sign_structure = true;
            s.coeff[0] = [](double k) { return cplx(std::abs(k), 0.0); };
            break;
        case generator_name::p:
            s.coeff[0] = [](double k) { return cplx(k, 0.0); };
            break;
        case generator_name::b:
            s.order = 1;
            s.sign_structure = true;
            s.coeff[0] = [](double k) { return kI * (0.5 * sgn(k)); };
            s.coeff[1] = [](double k) { return kI * std::abs(k); };
            break;
        case generator_name::d:
        case generator_name::l:
            s.order = 1;
            s.coeff[0] = [](double) { return kI * 0.5; };
            s.coeff[1] = [](double k) { return kI * k; };
            break;
        case generator_name::k1:
            s.order = 2;
            s.sign_structure = true;
            s.coeff[0] = [](double k) { return cplx(0.25 / std::abs(k), 0.0); };
            s.coeff[1] = [](double k) { return cplx(-sgn(k), 0.0); };
            s.coeff[2] = [](double k) { return cplx(-std::abs(k), 0.0); };
            break;
        case generator_name::k2:
            s.order = 2;
            s.coeff[0] = [](double k) { return cplx(0.25 / k, 0.0); };
            s.coeff[1] = [](double) { return cplx(-1.0, 0.0); };
            s.coeff[2] = [](double k) { return cplx(-k, 0.0); };
            break;
        case generator_name::k_entangler: {
            s.anomalous = true;
            entangler_profile ep;
            if (cutoff) {
                ep.lambda = cutoff->lambda;
                if (cutoff->provenance == profile_provenance::sharp_fixed_point)
                    ep.variant = entangler_variant::sharp;
            }
            s.coeff[0] = [ep](double k) { return cplx(entangler_g(ep, k), 0.0); };
            break;
        }
    }
    return s;
}

// dalpha/dk for the obstruction check; closed forms where the provenance
// provides them, Richardson differences for sampled profiles.
double profile_dalpha(const constraint_profile& p, double k) {
    const double ak = std::abs(k);
    switch (p.provenance) {
        case profile_provenance::analytic_ei:
            return sgn(k) * alpha_analytic_prime(ak, p.lambda);
        case profile_provenance::cft:
            return sgn(k);
        case profile_provenance::sharp_fixed_point:
            return ak < p.lambda ? sgn(k) : 0.0;
        default: {
            const double h = 1e-5 * std::max(ak, p.lambda);
            auto cd = [&](double hh) { return (p(k + hh) - p(k - hh)) / (2.0 * hh); };
            return (4.0 * cd(0.5 * h) - cd(h)) / 3.0;
        }
    }
}

// alpha with two derivatives, for the field-basis channel weights.
struct alpha_jet {
    double a, a1, a2;
};

alpha_jet alpha_derivs(const constraint_profile& p, double k) {
    const double ak = std::abs(k), s = sgn(k), lam = p.lambda;
    switch (p.provenance) {
        case profile_provenance::analytic_ei: {
            const double a = alpha_analytic(ak, lam);
            const double g = entangler_g_smooth(ak, lam);
            const double a1 = 2.0 * g * a / ak;  // d alpha / d|k|
            const double gp = -(2.0 * ak / (sigma_v<double> * lam * lam)) * g;
            const double a2 = 2.0 * (gp * a + g * a1) / ak - a1 / ak;
            return {a, s * a1, a2};
        }
        case profile_provenance::cft:
            return {ak, s, 0.0};
        case profile_provenance::sharp_fixed_point:
            return ak < lam ? alpha_jet{ak, s, 0.0} : alpha_jet{lam, 0.0, 0.0};
        default: {
            const double h = 1e-4 * std::max(ak, lam);
            const double f0 = p(k), fp = p(k + h), fm = p(k - h);
            const double fp2 = p(k + 0.5 * h), fm2 = p(k - 0.5 * h);
            const double d1 = (fp - fm) / (2.0 * h), d2 = (fp2 - fm2) / h;
            return {f0, (4.0 * d2 - d1) / 3.0, (fp - 2.0 * f0 + fm) / (h * h)};
        }
    }
}

}  // namespace

generator_symbol make_symbol(generator_name name) {
    return build_symbol(name, std::nullopt);
}

generator_symbol make_symbol(generator_name name,
                             const constraint_profile& cutoff) {
    return build_symbol(name, cutoff);
}

test_function make_test_function(
    const std::function<std::complex<double>(double)>& fn, double k_min,
    double k_max, int points) {
    if (!(k_min > 0.0) || !(k_max > k_min))
        throw std::invalid_argument("make_test_function: need 0 < k_min < k_max");
    if (points < 17 || points > 513)
        throw std::invalid_argument(
            "make_test_function: points per patch must lie in [17, 513]");
    test_function f;
    f.k_min = k_min;
    f.k_max = k_max;
    f.points = points;
    f.k = patch_nodes(-k_max, -k_min, points);
    const auto pos = patch_nodes(k_min, k_max, points);
    f.k.insert(f.k.end(), pos.begin(), pos.end());
    f.f.resize(f.k.size());
    for (std::size_t i = 0; i < f.k.size(); ++i) f.f[i] = fn(f.k[i]);
    const double top = max_abs(f.f);
    if (!std::isfinite(top) || top == 0.0)
        throw std::invalid_argument(
            "make_test_function: samples are zero or not finite");
    for (cplx& v : f.f) v /= top;
    return f;
}

test_function lin_comb(std::complex<double> a, const test_function& f,
                       std::complex<double> b, const test_function& g) {
    if (f.points != g.points || f.k_min != g.k_min || f.k_max != g.k_max)
        throw std::invalid_argument("lin_comb: test functions live on different grids");
    test_function out = f;
    for (std::size_t i = 0; i < out.f.size(); ++i)
        out.f[i] = a * f.f[i] + b * g.f[i];
    return out;
}

test_function apply_symbol(const generator_symbol& g, const test_function& f) {
    if (g.anomalous)
        throw std::domain_error(
            "apply_symbol: the entangler is pure pair creation at the "
            "one-particle level; it has no action on a single wavefunction");
    if (g.basis == symbol_basis::field)
        throw std::domain_error(
            "apply_symbol: field-basis symbols act on (phi, pi) coefficient "
            "pairs, not scalar test functions");
    check_support(f);
    test_function out = f;
    for (const auto& p : patches_of(f)) {
        const auto dv = patch_derivatives(f, p, g.order);
        for (int j = 0; j < f.points; ++j) {
            const double k = f.k[p.offset + j];
            cplx acc = g.coeff[0](k) * dv[0][j];
            for (int n = 1; n <= g.order; ++n) acc += g.coeff[n](k) * dv[n][j];
            out.f[p.offset + j] = acc;
        }
    }
    return out;
}

double commutator_residual(const generator_symbol& g1,
                           const generator_symbol& g2,
                           const std::vector<symbol_term>& expected,
                           const test_function& f) {
    const double tail = cheb_tail_ratio(f);
    if (tail > 1e-9) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "commutator_residual: test function under-resolved "
                      "(Chebyshev tail ratio %.1e on %d-point patches); "
                      "increase points in make_test_function",
                      tail, f.points);
        throw numerics_error(buf);
    }
    const test_function a = apply_symbol(g1, apply_symbol(g2, f));
    const test_function b = apply_symbol(g2, apply_symbol(g1, f));
    std::vector<cplx> want(f.f.size(), cplx{});
    for (const symbol_term& t : expected) {
        const test_function e = apply_symbol(t.symbol, f);
        for (std::size_t i = 0; i < want.size(); ++i)
            want[i] += t.weight * e.f[i];
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        num = std::max(num, std::abs(a.f[i] - b.f[i] - want[i]));
        den = std::max(den, std::abs(want[i]));
    }
    if (expected.empty() || den == 0.0) return num;
    return num / den;
}

std::vector<commutation_check> verify_commutation_relations(
    const test_function& f) {
    const generator_symbol sh = make_symbol(generator_name::h);
    const generator_symbol sp = make_symbol(generator_name::p);
    const generator_symbol sb = make_symbol(generator_name::b);
    const generator_symbol sd = make_symbol(generator_name::d);
    return {
        {"[H,P] = 0", commutator_residual(sh, sp, {}, f)},
        {"[B,D] = 0", commutator_residual(sb, sd, {}, f)},
        {"[B,H] = iP", commutator_residual(sb, sh, {{kI, sp}}, f)},
        {"[B,P] = iH", commutator_residual(sb, sp, {{kI, sh}}, f)},
        {"[D,H] = iH", commutator_residual(sd, sh, {{kI, sh}}, f)},
        {"[D,P] = iP", commutator_residual(sd, sp, {{kI, sp}}, f)},
    };
}

double dlambda_covariance_residual(const constraint_profile& profile,
                                   const entangler_profile& entangler,
                                   const std::vector<double>& k_grid) {
    if (k_grid.empty())
        throw std::invalid_argument("dlambda_covariance_residual: empty grid");
    double worst = 0.0;
    for (double k : k_grid) {
        if (k == 0.0)
            throw std::invalid_argument(
                "dlambda_covariance_residual: k = 0 is outside the operator "
                "domain");
        const double a = profile(k);
        const double ob =
            k * profile_dalpha(profile, k) / (2.0 * a) - entangler_g(entangler, k);
        worst = std::max(worst, std::abs(ob));
    }
    return worst;
}

scaling_check scaling_covariance_check(scaling_operator op,
                                       scaling_generator which,
                                       const constraint_profile& profile) {
    const double lam = profile.lambda;
    const int m = 97;
    const double lo = 0.3 * lam, hi = 6.0 * lam;
    const double vsign = (op == scaling_operator::dphi) ? -0.5 : 0.5;
    std::vector<cplx> c, cp;
    c.reserve(4 * m);
    cp.reserve(4 * m);
    const double sides[2][2] = {{-hi, -lo}, {lo, hi}};
    for (const auto& sd : sides) {
        const auto nodes = patch_nodes(sd[0], sd[1], m);
        const Eigen::MatrixXcd dm = patch_diff(sd[0], sd[1], m).cast<cplx>();
        Eigen::VectorXcd va(m), vb(m);
        std::vector<cplx> u(m), v(m);
        std::vector<double> al(m);
        for (int j = 0; j < m; ++j) {
            const double k = nodes[j], ak = std::abs(k);
            al[j] = profile(k);
            // chiral field at the origin over (phi(k), pi(k)): the
            // derivative part carries the phi-channel smearing, the
            // momentum part the pi-channel one
            u[j] = kI * (0.5 * k) * std::sqrt(al[j] / ak);
            v[j] = cplx(vsign * std::sqrt(ak / al[j]), 0.0);
            // coefficients over the cutoff modes and their conjugates
            va[j] = u[j] / std::sqrt(2.0 * al[j]) -
                    kI * v[j] * std::sqrt(0.5 * al[j]);
            vb[j] = u[j] / std::sqrt(2.0 * al[j]) +
                    kI * v[j] * std::sqrt(0.5 * al[j]);
        }
        const Eigen::VectorXcd da = dm * va, db = dm * vb;
        for (int j = 0; j < m; ++j) {
            const double k = nodes[j];
            // adjoint transport (k d/dk + 1/2); the boost weighs the
            // annihilation coefficient by sgn(k) and the creation one,
            // which sits at mode argument -k, by -sgn(k)
            const double sa =
                (which == scaling_generator::dilation) ? 1.0 : sgn(k);
            const double sb =
                (which == scaling_generator::dilation) ? 1.0 : -sgn(k);
            const cplx ap = sa * (k * da[j] + 0.5 * va[j]);
            const cplx bp = sb * (k * db[j] + 0.5 * vb[j]);
            const cplx up = std::sqrt(2.0 * al[j]) * 0.5 * (ap + bp);
            const cplx vp = -kI * (bp - ap) / std::sqrt(2.0 * al[j]);
            c.push_back(u[j]);
            c.push_back(v[j]);
            cp.push_back(up);
            cp.push_back(vp);
        }
    }
    cplx num{}, den{};
    for (std::size_t i = 0; i < c.size(); ++i) {
        num += std::conj(c[i]) * cp[i];
        den += std::conj(c[i]) * c[i];
    }
    const cplx ev = num / den;
    double top = 0.0, dev = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        top = std::max(top, std::abs(c[i]));
        dev = std::max(dev, std::abs(cp[i] - ev * c[i]));
    }
    return {ev.real(), dev / top};
}

std::vector<double> ns_spectrum(const constraint_profile& profile,
                                int n_levels) {
    if (n_levels < 1 || n_levels > 16)
        throw std::invalid_argument("ns_spectrum: n_levels must lie in [1, 16]");
    if (!(profile.lambda > 0.0))
        throw std::invalid_argument("ns_spectrum: profile needs a positive cutoff");
    // (H + K1)/2 on k > 0 is symmetric with the quadratic form
    //   (1/2) Int [ (k^2 + 1/4) f^2 + (df/du)^2 ] du,  |f|^2 = Int f^2 k du,
    // in u = log k.  First-order differences with Dirichlet ends and the
    // diagonal norm weight give a symmetric tridiagonal matrix.  The symbol
    // carries no profile dependence (it is the same over the cutoff modes
    // for every profile), so only the cutoff's positivity is checked.
    auto levels = [](double umin, double umax, int n) {
        const double h = (umax - umin) / (n - 1);
        Eigen::VectorXd diag(n), off(n - 1);
        std::vector<double> k(n);
        for (int i = 0; i < n; ++i) k[i] = std::exp(umin + i * h);
        for (int i = 0; i < n; ++i)
            diag[i] = (0.5 * (k[i] * k[i] + 0.25) + 1.0 / (h * h)) / k[i];
        for (int i = 0; i + 1 < n; ++i)
            off[i] = -1.0 / (2.0 * h * h * std::sqrt(k[i] * k[i + 1]));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    };
    const Eigen::VectorXd base = levels(-12.0, 4.0, 3000);
    const Eigen::VectorXd fine = levels(-16.0, 5.0, 8000);
    std::vector<double> out(n_levels);
    for (int i = 0; i < n_levels; ++i) {
        const double rel = std::abs(fine[i] - base[i]) / std::abs(fine[i]);
        if (rel > 1e-3) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "ns_spectrum: level %d moved by %.1e between the "
                          "base and the enlarged grid; not converged",
                          i + 1, rel);
            throw numerics_error(buf);
        }
        out[i] = fine[i];
    }
    return out;
}

generator_symbol symbol_conjugate(const generator_symbol& g,
                                  const constraint_profile& profile) {
    if (g.anomalous)
        throw std::domain_error(
            "symbol_conjugate: the entangler has no diagonal one-particle "
            "symbol to conjugate");
    if (g.basis == symbol_basis::field)
        throw std::domain_error("symbol_conjugate: symbol is already in the field basis");
    generator_symbol out;
    out.name = g.name;
    out.order = g.order;
    out.sign_structure = g.sign_structure;
    out.basis = symbol_basis::field;
    out.cutoff = profile;
    // Channel weights and their k-derivatives: sqrt(alpha/2) for phi,
    // i/sqrt(2 alpha) for pi (row weight conjugated).
    auto weights = [profile](double k, int channel) -> std::array<cplx, 3> {
        const alpha_jet j = alpha_derivs(profile, k);
        if (channel == 0) {
            const double w = std::sqrt(0.5 * j.a);
            const double w1 = j.a1 / (2.0 * std::sqrt(2.0 * j.a));
            const double w2 = j.a2 / (2.0 * std::sqrt(2.0 * j.a)) -
                              j.a1 * j.a1 / (2.0 * std::pow(2.0 * j.a, 1.5));
            return {cplx(w, 0.0), cplx(w1, 0.0), cplx(w2, 0.0)};
        }
        const double r = 1.0 / std::sqrt(2.0 * j.a);
        const double r1 = -j.a1 * std::pow(2.0 * j.a, -1.5);
        const double r2 = -j.a2 * std::pow(2.0 * j.a, -1.5) +
                          3.0 * j.a1 * j.a1 * std::pow(2.0 * j.a, -2.5);
        return {kI * r, kI * r1, kI * r2};
    };
    for (int r = 0; r < 2; ++r)
        for (int ch = 0; ch < 2; ++ch)
            for (int n = 0; n <= 2; ++n) {
                out.block[r][ch][n] = [sym = g, weights, r, ch, n](double k) {
                    static const double binom[3][3] = {
                        {1, 0, 0}, {1, 1, 0}, {1, 2, 1}};
                    const auto cw = weights(k, ch);
                    const cplx rw0 = weights(k, r)[0];
                    const cplx roww = (r == 0) ? rw0 : std::conj(rw0);
                    cplx acc{};
                    for (int mm = n; mm <= sym.order; ++mm)
                        acc += sym.coeff[mm](k) * binom[mm][n] * cw[mm - n];
                    return roww * acc;
                };
            }
    return out;
}

}  // namespace cmera
