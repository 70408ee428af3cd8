#include "cmera/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cmera {

namespace {

constexpr double k_max_default = 40.0;  // entangler piece of alpha is 1 to ~1e-98 here
constexpr double sigma_d = 1.7810724179901979852;

double subtractor_d(kernel_kind kind, double q) {
    const double e = kind == kernel_kind::phi ? -0.25 : 0.25;
    return std::pow(1.0 + q * q, e);
}

}  // namespace

double symbol_remainder(kernel_kind kind, double q, const constraint_profile& profile) {
    if (q == 0.0) return 0.0;
    const double aq = std::abs(q);
    // q is dimensionless; the profile lives at physical k = q * lambda, and
    // alpha scales like lambda, so alpha(q*lambda)/lambda is the unit-cutoff
    // profile value.  The symbol is scale-free.
    const double a = profile(aq * profile.lambda) / profile.lambda;
    const double sym =
        kind == kernel_kind::phi ? std::sqrt(a / aq) : std::sqrt(aq / a);
    return sym - subtractor_d(kind, q);
}

std::vector<tail_term> remainder_tail_terms(kernel_kind kind, int jmax) {
    // rem(q) = -sum_{j>=1} binom(e, j) q^{e_pow - 2j} for q beyond the
    // entangler's reach, where e = -1/4 (phi, e_pow = -1/2) or +1/4 (pi, +1/2).
    const double e = kind == kernel_kind::phi ? -0.25 : 0.25;
    std::vector<tail_term> out;
    double binom = 1.0;
    for (int j = 1; j <= jmax; ++j) {
        binom *= (e - (j - 1)) / j;
        const double p = 2.0 * j + (kind == kernel_kind::phi ? 0.5 : -0.5);
        out.push_back({-binom, p});
    }
    return out;
}

namespace {

// Analytic transform of the large-q tail: int_K^inf cos(q xi) q^{-p} dq.
double tail_cos(kernel_kind kind, double xi, double K) {
    double s = 0.0;
    for (const auto& t : remainder_tail_terms(kind)) {
        if (xi == 0.0)
            s += t.c * std::pow(K, 1.0 - t.p) / (t.p - 1.0);
        else
            s += t.c * std::pow(xi, t.p - 1.0) * power_tail(t.p, K * xi).cosine;
    }
    return s;
}

// d/dxi of the tail: -int_K^inf q^{1-p} sin(q xi) dq per term.
double tail_sin_deriv(kernel_kind kind, double xi, double K) {
    double s = 0.0;
    for (const auto& t : remainder_tail_terms(kind))
        s += t.c * std::pow(xi, t.p - 2.0) * power_tail(t.p - 1.0, K * xi).sine;
    return s;
}

void assert_remainder_decays(kernel_kind kind, const constraint_profile& profile, double K) {
    const double far = std::abs(symbol_remainder(kind, K, profile));
    const double mid = std::abs(symbol_remainder(kind, 0.5 * K, profile));
    if (!(far < 5e-3) || !(far < mid * 1.0001 + 1e-15))
        throw std::invalid_argument(
            "remainder_ft: remainder symbol does not decay toward k_max for this profile "
            "(the transform is distributional; use the pairing route instead)");
}

double core_cos(kernel_kind kind, const constraint_profile& profile, double xi, double K,
                int order) {
    const auto rem = [&](double q) { return symbol_remainder(kind, q, profile); };
    if (xi == 0.0) return integrate(rem, 0.0, K, 1e-15, 1e-14);
    return cosine_transform(rem, K, xi, order);
}

}  // namespace

transform_point remainder_ft(kernel_kind kind, double xi, const constraint_profile& profile,
                             int order) {
    if (xi < 0.0) xi = -xi;  // even by construction
    const double K = k_max_default;
    assert_remainder_decays(kind, profile, K);
    const double pref = std::sqrt(2.0 / M_PI);
    // Independent split at K/2 doubles as the error estimate: it moves weight
    // between the numerical core and the analytic tail model.
    const double v_full = pref * (core_cos(kind, profile, xi, K, order) + tail_cos(kind, xi, K));
    const double v_half =
        pref * (core_cos(kind, profile, xi, 0.5 * K, order) + tail_cos(kind, xi, 0.5 * K));
    const double err = std::abs(v_full - v_half) + 1e-19 * (1.0 + xi);
    return {v_full, err};
}

transform_point remainder_ft_deriv(kernel_kind kind, double xi, const constraint_profile& profile,
                                   int order) {
    if (xi == 0.0) return {0.0, 0.0};  // odd integrand: derivative of an even kernel
    const double s = xi < 0.0 ? -1.0 : 1.0;
    xi = std::abs(xi);
    const double K = k_max_default;
    assert_remainder_decays(kind, profile, K);
    const auto qrem = [&](double q) { return q * symbol_remainder(kind, q, profile); };
    const double pref = -std::sqrt(2.0 / M_PI);
    const double v_full =
        pref * (sine_transform(qrem, K, xi, order) + tail_sin_deriv(kind, xi, K));
    const double v_half =
        pref * (sine_transform(qrem, 0.5 * K, xi, order) + tail_sin_deriv(kind, xi, 0.5 * K));
    return {s * v_full, std::abs(v_full - v_half) + 1e-19 * (1.0 + xi)};
}

double remainder_ft_extended(kernel_kind kind, double xi) {
    xi = std::abs(xi);
    const double K = k_max_default;
    const auto rem = [&](extended q) { return symbol_remainder(kind, q); };
    extended core;
    if (xi == 0.0)
        core = integrate(rem, extended(0), extended(K), extended("1e-30"), extended("1e-28"));
    else
        core = cosine_transform(rem, extended(K), extended(xi), 32);
    return std::sqrt(2.0 / M_PI) * (static_cast<double>(core) + tail_cos(kind, xi, K));
}

// ---------------------------------------------------------------------------

kernel_sample total_kernel(kernel_kind kind, double x, const constraint_profile& profile,
                           int order) {
    const double xi = std::abs(x) * profile.lambda;
    if (xi == 0.0)
        throw std::domain_error("total_kernel: pointwise value undefined at x = 0; use the pairing");
    const double sing = singular_kernel(kind, xi);
    const auto reg = remainder_ft(kind, xi, profile, order);
    const double tot = sing + reg.value;
    kernel_sample s;
    s.x = std::abs(x);
    s.lambda_x = xi;
    s.singular = sing;
    s.regular = reg.value;
    s.total = tot;
    s.err = reg.error + 4e-16 * std::abs(sing);
    s.sign = tot > 0.0 ? 1 : (tot < 0.0 ? -1 : 0);
    return s;
}

std::vector<kernel_sample> kernel_table(kernel_kind kind, const std::vector<double>& x_grid,
                                        const constraint_profile& profile, double err_tol,
                                        int order) {
    std::vector<kernel_sample> out;
    out.reserve(x_grid.size());
    double worst_err = 0.0, worst_x = 0.0;
    for (double x : x_grid) {
        out.push_back(total_kernel(kind, x, profile, order));
        if (out.back().err > worst_err) {
            worst_err = out.back().err;
            worst_x = x;
        }
    }
    if (worst_err > err_tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "kernel_table: error bar %.3e exceeds tolerance %.3e (worst at Lambda*x = %.6g)",
                      worst_err, err_tol, worst_x);
        throw numerics_error(msg);
    }
    return out;
}

double total_kernel_deriv(kernel_kind kind, double xi, const constraint_profile& profile,
                          int order) {
    return singular_kernel_deriv(kind, xi) + remainder_ft_deriv(kind, xi, profile, order).value;
}

// ---------------------------------------------------------------------------

pairing_fit hadamard_pairing(const std::function<double(double)>& f, double f_at_0,
                             double lambda) {
    // Dyadic cells from the singular edge outward; each cell sees a smooth
    // integrand whose scale matches the cell, so fixed tolerance is cheap.
    const double upper = 60.0 / lambda;  // |mu1_pi| < 1e-25 beyond
    const int j_lo = 4, j_hi = 20;
    std::vector<double> edges;
    for (int j = j_hi; j >= j_lo; --j) edges.push_back(std::pow(2.0, -j));
    while (edges.back() < upper) edges.push_back(std::min(2.0 * edges.back(), upper));

    // full-line integral folded onto x > 0; odd parts of f drop out exactly
    const auto integrand = [&](double x) {
        return singular_kernel(kernel_kind::pi, lambda * x) * (f(x) + f(-x));
    };
    std::vector<double> cell(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        cell[i] = integrate(integrand, edges[i], edges[i + 1], 1e-15, 3e-14);
    // suffix sums: integral from edges[i] to upper
    std::vector<double> suffix(edges.size(), 0.0);
    for (std::size_t i = cell.size(); i-- > 0;) suffix[i] = suffix[i + 1] + cell[i];

    pairing_fit fit;
    const double ct = 2.0 * std::pow(lambda, -1.5) * f_at_0;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double eps = std::pow(2.0, -j);
        const std::size_t idx = static_cast<std::size_t>(j_hi - j);
        fit.eps.push_back(eps);
        fit.regulated.push_back(suffix[idx] + ct / std::sqrt(eps));
    }

    // I(eps) = I0 + sum_m a_m eps^{m/2}: the kernel's Frobenius expansion at
    // the origin feeds every half-integer power; for even f the sqrt(eps)
    // coefficient vanishes, so it doubles as a consistency monitor.
    const int n = static_cast<int>(fit.eps.size());
    const int cols = 6;  // 1, sqrt(eps), ..., eps^{5/2}
    Eigen::MatrixXd A(n, cols);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double s = std::sqrt(fit.eps[static_cast<std::size_t>(i)]);
        A(i, 0) = 1.0;
        for (int m = 1; m < cols; ++m) A(i, m) = A(i, m - 1) * s;
        b(i) = fit.regulated[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
    fit.value = coef(0);
    fit.error = (A * coef - b).cwiseAbs().maxCoeff();
    return fit;
}

// ---------------------------------------------------------------------------

std::vector<residual_sample> integral_equation_residual(const std::vector<double>& xs,
                                                        int conv_order) {
    const constraint_profile profile = make_analytic_profile();
    // Convolution range: ghat and mu are both negligible once |y| ~ 12.
    const double L = 12.0;
    const auto& rule = gauss_legendre<double>(conv_order);
    const double tmax = std::sqrt(L);
    // Substitution y = t^2 tames the |y|^{-1/2} edge of mu_phi; kernel values
    // at the t-nodes are computed once and reused for every requested x.
    std::vector<double> tn(rule.nodes.size()), wn(rule.nodes.size()), mu_n(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        tn[i] = 0.5 * tmax * (rule.nodes[i] + 1.0);
        wn[i] = 0.5 * tmax * rule.weights[i];
        mu_n[i] = total_kernel(kernel_kind::phi, tn[i] * tn[i], profile).total;
    }
    const auto ghat = [](double x) {
        return std::sqrt(sigma_d / 8.0) * std::exp(-sigma_d * x * x / 4.0);
    };

    std::vector<residual_sample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        const double m = total_kernel(kernel_kind::phi, x, profile).total;
        const double dm = total_kernel_deriv(kernel_kind::phi, x, profile);
        double conv = 0.0;
        for (std::size_t i = 0; i < tn.size(); ++i) {
            const double y = tn[i] * tn[i];
            conv += wn[i] * 2.0 * tn[i] * (ghat(x - y) + ghat(x + y)) * mu_n[i];
        }
        conv /= std::sqrt(2.0 * M_PI);
        residual_sample r;
        r.x = x;
        r.term_deriv = x * dm;
        r.term_half = 0.5 * m;
        r.term_conv = conv;
        r.residual = r.term_deriv + r.term_half + r.term_conv;
        r.rel = std::abs(r.residual) /
                std::max({std::abs(r.term_deriv), std::abs(r.term_half), std::abs(r.term_conv)});
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// least-squares slope of y against x with free offset
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

decay_fit decay_law_fit(double xi_lo, double xi_hi, int n, bool extended_core) {
    if (!(xi_lo > 1.0) || !(xi_hi > xi_lo) || n < 3)
        throw std::invalid_argument("decay_law_fit: need 1 < xi_lo < xi_hi and n >= 3");
    const constraint_profile profile = make_analytic_profile();
    decay_fit fit;
    std::vector<double> u_law;
    for (int i = 0; i < n; ++i) {
        const double xi = xi_lo * std::pow(xi_hi / xi_lo, double(i) / double(n - 1));
        const double mu2 = extended_core ? remainder_ft_extended(kernel_kind::phi, xi)
                                         : remainder_ft(kernel_kind::phi, xi, profile).value;
        const double tot = singular_kernel(kernel_kind::phi, xi) + mu2;
        fit.xi.push_back(xi);
        fit.u_hat.push_back(-std::log(std::abs(tot)));
        u_law.push_back(xi * std::sqrt(sigma_d * std::log(xi)));
        fit.ratio.push_back(fit.u_hat.back() / u_law.back());
    }
    const auto [lo_it, hi_it] = std::minmax_element(fit.ratio.begin(), fit.ratio.end());
    fit.ratio_lo = *lo_it;
    fit.ratio_hi = *hi_it;
    bool drifting = std::abs(fit.ratio.back() - 1.0) < std::abs(fit.ratio.front() - 1.0);
    for (std::size_t i = 0; i + 1 < fit.ratio.size(); ++i)
        drifting = drifting &&
                   std::abs(fit.ratio[i + 1] - 1.0) <= std::abs(fit.ratio[i] - 1.0) + 1e-3;
    fit.ratio_drifts_toward_one = drifting;
    fit.fitted_exp_rate = ls_slope(fit.xi, fit.u_hat);
    fit.fitted_law_slope = ls_slope(u_law, fit.u_hat);

    // sign changes of the oscillating pi kernel across the same window
    int changes = 0;
    int prev = 0;
    const int m = std::max(3 * n, static_cast<int>((xi_hi - xi_lo) / 0.05) + 1);
    for (int i = 0; i < m; ++i) {
        const double xi = xi_lo + (xi_hi - xi_lo) * double(i) / double(m - 1);
        const auto s = total_kernel(kernel_kind::pi, xi, profile);
        if (prev != 0 && s.sign != 0 && s.sign != prev) ++changes;
        if (s.sign != 0) prev = s.sign;
    }
    fit.pi_sign_changes = changes;
    return fit;
}

decay_fit decay_law_fit_cft() {
    // alpha = |k| makes the map the identity: the kernel is a delta
    // distribution with no pointwise decay to fit.
    decay_fit fit;
    fit.applicable = false;
    return fit;
}

}  // namespace cmera
