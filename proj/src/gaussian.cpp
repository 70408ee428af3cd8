#include "cmera/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "cmera/kernels.hpp"
#include "cmera/precision.hpp"
#include "cmera/quadrature.hpp"

namespace cmera {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kFourPi = 4.0 * kPi;

// Momentum support of the subtracted symbols in cutoff units: every decaying
// profile used here has alpha -> lambda to ~1e-34 by q = 14, so truncating the
// transforms there is exact at double precision.
constexpr double kQMax = 14.0;

bool is_cft(const constraint_profile& p) { return p.provenance == profile_provenance::cft; }

// alpha at physical momentum q*lambda, in units of lambda (unit-cutoff value).
double unit_alpha(const constraint_profile& p, double q) { return p(q * p.lambda) / p.lambda; }

// Even symbol of <dphi dphi> with its large-q finite part (q^2/2 + 1/2)
// removed; the odd -k piece has vanishing real part pointwise for x != 0.
double w_dphi(const constraint_profile& p, double q) {
    if (q == 0.0) return 0.5 * unit_alpha(p, 0.0) - 0.5;
    const double a = unit_alpha(p, q);
    return 0.5 * q * q / a + 0.5 * a - 0.5 * q * q - 0.5;
}

// Even symbol of <dphi dbar> with its large-q finite part (q^2/2 - 1/2)
// removed; identically zero when alpha = |k|.
double w_mixed(const constraint_profile& p, double q) {
    if (q == 0.0) return 0.5 - 0.5 * unit_alpha(p, 0.0);
    const double a = unit_alpha(p, q);
    return 0.5 * q * q / a - 0.5 * a - 0.5 * q * q + 0.5;
}

// Physical (unsubtracted) even symbols, used only for the k_IR exclusion
// window [0, q_ir] where the subtractions play no role.
double phys_dphi(const constraint_profile& p, double q) {
    if (q == 0.0) return 0.5 * unit_alpha(p, 0.0);
    const double a = unit_alpha(p, q);
    return 0.5 * q * q / a + 0.5 * a - q;
}
double phys_mixed(const constraint_profile& p, double q) {
    if (q == 0.0) return -0.5 * unit_alpha(p, 0.0);
    const double a = unit_alpha(p, q);
    return 0.5 * q * q / a - 0.5 * a;
}

// Subtracted even-symbol transform: lambda^2/(4pi) * int_0^14 cos(q xi) W dq,
// minus the same integral restricted to the excluded IR window when
// ir_cutoff > 0 (there with the physical symbol).
template <class W, class Phys>
double even_transform(const gaussian_state& st, double x, int order, W&& w, Phys&& phys) {
    const double lam = st.profile.lambda;
    const double xi = std::abs(x) * lam;
    auto f = [&](double q) { return w(st.profile, q); };
    double t = xi == 0.0 ? integrate(f, 0.0, kQMax, 1e-15, 1e-13)
                         : cosine_transform(f, kQMax, xi, order);
    if (st.ir_cutoff > 0.0) {
        const double q_ir = st.ir_cutoff / lam;
        auto g = [&](double q) { return std::cos(q * xi) * phys(st.profile, q); };
        t -= integrate(g, 0.0, q_ir, 1e-18, 1e-10);
    }
    return lam * lam * t / kFourPi;
}

// Cosine integral Ci(z) = gamma + ln z + int_0^z (cos t - 1)/t dt, z > 0.
double cosint(double z) {
    if (!(z > 0.0)) throw std::domain_error("cosint: argument must be positive");
    if (z > 3.0) return -power_tail(1.0, z).cosine;
    constexpr double kEulerGamma = 0.57721566490153286061;
    double sum = 0.0, p = 1.0;
    for (int m = 1; m < 40; ++m) {
        p *= -z * z / ((2.0 * m - 1.0) * (2.0 * m));
        const double term = p / (2.0 * m);
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return kEulerGamma + std::log(z) + sum;
}

struct line_fit {
    double slope, intercept, r_squared;
};

// Weighted least squares of y against x; weights w_i = 1/sigma_i^2.
line_fit weighted_line_fit(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& sigmas) {
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::max(sigmas[i], 1e-12);
        const double w = 1.0 / (s * s);
        sw += w;
        swx += w * xs[i];
        swy += w * ys[i];
        swxx += w * xs[i] * xs[i];
        swxy += w * xs[i] * ys[i];
    }
    const double det = sw * swxx - swx * swx;
    if (det == 0.0) throw numerics_error("weighted_line_fit: degenerate abscissae");
    line_fit out{};
    out.slope = (sw * swxy - swx * swy) / det;
    out.intercept = (swy - out.slope * swx) / sw;
    const double ybar = swy / sw;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = std::max(sigmas[i], 1e-12);
        const double w = 1.0 / (s * s);
        const double yhat = out.intercept + out.slope * xs[i];
        ss_res += w * (ys[i] - yhat) * (ys[i] - yhat);
        ss_tot += w * (ys[i] - ybar) * (ys[i] - ybar);
    }
    out.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return out;
}

power_fit fit_log_log(const correlator_table& t, double r2_min) {
    const std::size_t n = t.separations.size();
    if (n < 3) throw std::invalid_argument("dimension_fit: need at least 3 rows");
    std::vector<double> lx(n), ly(n), sig(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = t.values[i];
        if (v == 0.0 || !(t.separations[i] > 0.0))
            throw std::invalid_argument("dimension_fit: zero value or nonpositive separation");
        lx[i] = std::log(t.separations[i]);
        ly[i] = std::log(std::abs(v));
        sig[i] = t.errors[i] / std::abs(v);  // error of log|v|
    }
    const line_fit f = weighted_line_fit(lx, ly, sig);
    if (f.r_squared < r2_min) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "dimension_fit: poor linearity, r^2 = %.6f below threshold %.6f",
                      f.r_squared, r2_min);
        throw numerics_error(msg);
    }
    return power_fit{-f.slope / 2.0, std::exp(f.intercept), f.r_squared};
}

std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, double(i) / double(n - 1));
    return xs;
}

}  // namespace

double phi_covariance(const constraint_profile& p, double k) {
    const double a = p(k);
    if (a == 0.0) throw std::domain_error("phi_covariance: alpha vanishes at this momentum");
    return 0.5 / a;
}

double pi_covariance(const constraint_profile& p, double k) { return 0.5 * p(k); }

double corr_dphi_dphi(const gaussian_state& st, double x, int order) {
    if (is_cft(st.profile)) {
        if (x == 0.0) throw std::domain_error("corr_dphi_dphi: scale-invariant profile diverges at x = 0");
        return -1.0 / (kFourPi * x * x);
    }
    return even_transform(st, x, order, w_dphi, phys_dphi);
}

double corr_dbar_dbar(const gaussian_state& st, double x, int order) {
    return corr_dphi_dphi(st, x, order);
}

double corr_mixed(const gaussian_state& st, double x, int order) {
    if (is_cft(st.profile)) return 0.0;
    return even_transform(st, x, order, w_mixed, phys_mixed);
}

double corr_TT(const gaussian_state& st, double x, int order) {
    const double c = corr_dphi_dphi(st, x, order);
    return 8.0 * kPi * kPi * c * c;
}

double corr_phi_phi_subtracted(const gaussian_state& st, double x, double x_ref) {
    if (!(x >= 0.0) || !(x_ref > 0.0))
        throw std::domain_error("corr_phi_phi_subtracted: need x >= 0 and x_ref > 0");
    const double lam = st.profile.lambda;
    if (is_cft(st.profile)) {
        if (!(x > 0.0))
            throw std::domain_error("corr_phi_phi_subtracted: scale-invariant profile diverges at x = 0");
        return -std::log(x / x_ref) / kTwoPi;
    }
    const double xi = x * lam, xr = x_ref * lam;
    // 1/(2 alpha) - 1/2 decays past the cutoff scale; the dropped constant
    // has vanishing Abel finite part against the cosine difference.
    auto f = [&](double q) {
        return (std::cos(q * xi) - std::cos(q * xr)) * (0.5 / unit_alpha(st.profile, q) - 0.5);
    };
    double v = integrate(f, 0.0, kQMax, 1e-15, 3e-13);
    if (st.ir_cutoff > 0.0) {
        auto g = [&](double q) {
            return (std::cos(q * xi) - std::cos(q * xr)) * 0.5 / unit_alpha(st.profile, q);
        };
        v -= integrate(g, 0.0, st.ir_cutoff / lam, 1e-18, 1e-10);
    }
    return v / kPi;
}

double vertex_g_reg(const gaussian_state& st, double x, double k_ir) {
    if (!(x > 0.0) || !(k_ir > 0.0))
        throw std::domain_error("vertex_g_reg: need x > 0 and k_IR > 0");
    if (!(x * k_ir < 0.1)) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "vertex_g_reg: window violation, x*k_IR = %.3g must stay below 0.1",
                      x * k_ir);
        throw std::domain_error(msg);
    }
    if (is_cft(st.profile)) return -cosint(k_ir * x) / kTwoPi;
    const double lam = st.profile.lambda;
    const double xi = x * lam, q_ir = k_ir / lam;
    // 1/alpha - 1 is integrable at q_ir and decays past the cutoff; the
    // dropped constant keeps its Abel value -sin(k_IR x)/x (times 1/lambda
    // after the substitution).
    auto f = [&](double q) { return (1.0 / unit_alpha(st.profile, q) - 1.0) * std::cos(q * xi); };
    const double core = integrate(f, q_ir, kQMax, 1e-13, 3e-13);
    return (core - std::sin(q_ir * xi) / xi) / kTwoPi;
}

double vertex_correlator(const gaussian_state& st, double nu, double x, double k_ir) {
    if (nu == 0.0) return 1.0;
    return std::exp(nu * nu * vertex_g_reg(st, x, k_ir));
}

correlator_table tabulate(const gaussian_state& st, correlator_kind kind,
                          const std::vector<double>& xs, double nu, double k_ir,
                          double x_ref) {
    correlator_table t;
    t.kind = kind;
    t.nu = nu;
    t.k_ir = k_ir;
    t.separations = xs;
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw std::invalid_argument("tabulate: separations must be ascending");
    t.values.reserve(xs.size());
    t.errors.reserve(xs.size());
    const bool cft = is_cft(st.profile);
    for (const double x : xs) {
        double v = 0.0, e = 0.0;
        switch (kind) {
            case correlator_kind::dphi_dphi:
            case correlator_kind::dbar_dbar: {
                v = corr_dphi_dphi(st, x, 24);
                e = cft || x == 0.0 ? 1e-13 * std::abs(v)
                                    : std::abs(v - corr_dphi_dphi(st, x, 16)) + 1e-18;
                break;
            }
            case correlator_kind::mixed_dphi_dbar: {
                v = corr_mixed(st, x, 24);
                e = cft || x == 0.0 ? 1e-13 * std::abs(v) + 1e-18
                                    : std::abs(v - corr_mixed(st, x, 16)) + 1e-18;
                break;
            }
            case correlator_kind::stress_stress: {
                const double c24 = corr_dphi_dphi(st, x, 24);
                v = 8.0 * kPi * kPi * c24 * c24;
                const double ec = cft || x == 0.0
                                      ? 1e-13 * std::abs(c24)
                                      : std::abs(c24 - corr_dphi_dphi(st, x, 16)) + 1e-18;
                e = 16.0 * kPi * kPi * std::abs(c24) * ec + 1e-30;
                break;
            }
            case correlator_kind::vertex: {
                const double g = vertex_g_reg(st, x, k_ir);
                v = nu == 0.0 ? 1.0 : std::exp(nu * nu * g);
                e = std::abs(v) * nu * nu * (3e-13 * std::abs(g) + 1e-13);
                break;
            }
            case correlator_kind::phi_phi_subtracted: {
                v = corr_phi_phi_subtracted(st, x, x_ref);
                e = 3e-13 * std::abs(v) + 1e-13;
                break;
            }
        }
        t.values.push_back(v);
        t.errors.push_back(e);
    }
    return t;
}

power_fit dimension_fit(const correlator_table& t, double r2_min) { return fit_log_log(t, r2_min); }

power_fit vertex_dimension_fit(double nu, const correlator_table& t, double r2_min) {
    if (t.kind != correlator_kind::vertex || t.nu != nu)
        throw std::invalid_argument("vertex_dimension_fit: table is not a vertex table for this charge");
    return fit_log_log(t, r2_min);
}

double central_charge_fit(const correlator_table& t) {
    if (t.kind != correlator_kind::stress_stress)
        throw std::invalid_argument("central_charge_fit: needs a stress-stress table");
    if (t.separations.size() < 2)
        throw std::invalid_argument("central_charge_fit: need at least 2 rows");
    double sw = 0, swc = 0, cmin = 0, cmax = 0;
    for (std::size_t i = 0; i < t.separations.size(); ++i) {
        const double x = t.separations[i];
        const double c = 2.0 * x * x * x * x * t.values[i];
        const double ec = std::max(2.0 * x * x * x * x * t.errors[i], 1e-15);
        const double w = 1.0 / (ec * ec);
        sw += w;
        swc += w * c;
        cmin = i == 0 ? c : std::min(cmin, c);
        cmax = i == 0 ? c : std::max(cmax, c);
    }
    const double c = swc / sw;
    if (!(std::abs(cmax - cmin) <= 0.05 * std::abs(c))) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "central_charge_fit: plateau spread %.3g exceeds 5%% of c = %.6f",
                      cmax - cmin, c);
        throw numerics_error(msg);
    }
    return c;
}

double spin_decomposition_ratio(const gaussian_state& st, double x) {
    const double d = corr_dphi_dphi(st, x);
    if (d == 0.0) throw numerics_error("spin_decomposition_ratio: vanishing dphi correlator");
    return std::abs(corr_mixed(st, x)) / std::abs(d);
}

smear_check smeared_phi_crosscheck(double x, double x_ref) {
    if (!(x > 0.0) || !(x_ref > 0.0) || x == x_ref)
        throw std::domain_error("smeared_phi_crosscheck: need distinct positive separations");
    const constraint_profile prof = make_analytic_profile(1.0);

    // Real-space route: the inverse-smeared field carries the pi-type kernel,
    // split as the closed-form singular part (Hadamard-paired against the
    // massless logarithm) plus the regular remainder kernel (plain
    // quadrature); the smearing convolution carries 1/sqrt(2 pi) in the
    // symmetric transform convention.  The IR constant of the logarithm
    // cancels in the x vs x_ref difference because the kernel has unit
    // integral against the finite part.
    auto smear_at = [&](double c) {
        // floor the log argument: bisection midpoints can land exactly on the
        // (integrable) singularity at w = c; the floored sliver contributes
        // below 1e-28
        auto f = [c](double w) { return -std::log(std::max(std::abs(c - w), 1e-30)) / kTwoPi; };
        const pairing_fit p = hadamard_pairing(f, -std::log(c) / kTwoPi, 1.0);
        auto rem = [&](double w) {
            return remainder_ft(kernel_kind::pi, w, prof).value * (f(w) + f(-w));
        };
        return p.value + integrate(rem, 0.0, 40.0, 1e-12, 1e-11);
    };

    // Momentum route: symbol sqrt(q/alpha)/(2q) = 1/(2 sqrt(q alpha)), exactly
    // q^{-1/2}/2 past q = 20; core to 40 plus the analytic oscillatory tail.
    auto f = [&](double q) {
        return (std::cos(q * x) - std::cos(q * x_ref)) / (2.0 * std::sqrt(q * alpha_analytic(q)));
    };
    const double core = integrate(f, 0.0, 40.0, 1e-14, 3e-13);
    const double tail = 0.5 * (power_tail(0.5, 40.0 * x).cosine / std::sqrt(x) -
                               power_tail(0.5, 40.0 * x_ref).cosine / std::sqrt(x_ref));

    smear_check out;
    out.x = x;
    out.x_ref = x_ref;
    out.real_space = (smear_at(x) - smear_at(x_ref)) / std::sqrt(kTwoPi);
    out.momentum = (core + tail) / kPi;
    return out;
}

conformal_summary conformal_data(const gaussian_state& st, const fit_window& dphi_window,
                                 const fit_window& vertex_window, double vertex_k_ir,
                                 const std::vector<double>& nus) {
    if (!(dphi_window.lo > 0.0) || !(dphi_window.hi > dphi_window.lo) || dphi_window.n < 3 ||
        !(vertex_window.lo > 0.0) || !(vertex_window.hi > vertex_window.lo) || vertex_window.n < 3)
        throw std::invalid_argument("conformal_data: fit windows need lo < hi and n >= 3");
    const double lam = st.profile.lambda;
    conformal_summary s;
    s.window = dphi_window;
    s.vertex_window = vertex_window;
    s.vertex_k_ir = vertex_k_ir;

    std::vector<double> xs = geomspace(dphi_window.lo / lam, dphi_window.hi / lam, dphi_window.n);
    const correlator_table dphi = tabulate(st, correlator_kind::dphi_dphi, xs);
    const power_fit f = dimension_fit(dphi);
    s.delta_dphi = f.delta;
    s.amplitude = f.amplitude;
    s.r_squared = f.r_squared;
    s.ope_coefficient = kFourPi * f.amplitude;
    s.central_charge = central_charge_fit(tabulate(st, correlator_kind::stress_stress, xs));
    s.spin_ratio = spin_decomposition_ratio(st, dphi_window.hi / lam);

    const std::vector<double> vx =
        geomspace(vertex_window.lo / lam, vertex_window.hi / lam, vertex_window.n);
    for (const double nu : nus) {
        const correlator_table tv = tabulate(st, correlator_kind::vertex, vx, nu, vertex_k_ir);
        const double d = vertex_dimension_fit(nu, tv).delta;
        // sweep the regulator 10x downward: the upward direction would leave
        // the window x << 1/k_IR at its upper edge
        const correlator_table tv10 =
            tabulate(st, correlator_kind::vertex, vx, nu, vertex_k_ir / 10.0);
        const double d10 = vertex_dimension_fit(nu, tv10).delta;
        s.vertex_nu.push_back(nu);
        s.vertex_delta.push_back(d);
        s.vertex_delta_expected.push_back(nu * nu / kFourPi);
        s.vertex_delta_shift.push_back(std::abs(d10 - d) / std::abs(d));
    }
    return s;
}

}  // namespace cmera
