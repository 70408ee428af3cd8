#pragma once
// Smearing kernels mu_phi(x), mu_pi(x): the real-space profiles by which the
// symplectic map V spreads sharp field operators over a length ~1/Lambda.
//
// Momentum side (dimensionless q = k/Lambda):
//   phi symbol  sqrt(alpha(q)/q),  pi symbol  sqrt(q/alpha(q))
// Each symbol is split as subtractor + remainder, with
//   subtractor_phi = (1+q^2)^{-1/4},  subtractor_pi = (1+q^2)^{+1/4},
// chosen to carry the exact large-q asymptotics.  The subtractor transforms in
// closed form (Bessel K; the "singular part"), the remainder decays
// algebraically and is transformed numerically (the "regular part").
//
// All kernels here are the dimensionless shapes m(Lambda*x) -- functions of
// xi = Lambda*x only, with no Jacobian prefactor, matching the closed forms
//   mu1_phi(xi) = 2^{3/4} K_{1/4}(xi) / (Gamma(1/4) xi^{1/4})
//   mu1_pi(xi)  = 2^{5/4} K_{3/4}(xi) / (Gamma(-1/4) xi^{3/4}).
// Small-xi laws: mu_phi ~ xi^{-1/2}, mu_pi ~ -1/2 xi^{-3/2} (exactly, because
// 2 Gamma(3/4)/Gamma(-1/4) = -1/2).

#include <functional>
#include <vector>

#include "cmera/precision.hpp"
#include "cmera/profiles.hpp"
#include "cmera/quadrature.hpp"
#include "cmera/specfun.hpp"

namespace cmera {

enum class kernel_kind { phi, pi };

// --- momentum-space symbols (q in units of Lambda; alpha at Lambda = 1) ----

template <class R>
R smearing_symbol(kernel_kind kind, R q) {
    using std::abs;
    using std::sqrt;
    const R a = alpha_analytic(abs(q));
    return kind == kernel_kind::phi ? sqrt(a / abs(q)) : sqrt(abs(q) / a);
}

template <class R>
R symbol_subtractor(kernel_kind kind, R q) {
    using std::pow;
    const R e = kind == kernel_kind::phi ? real_const<R>("-0.25") : real_const<R>("0.25");
    return pow(R(1) + q * q, e);
}

// symbol - subtractor for the analytic profile; -> 0 at both ends of the
// q axis.  The q = 0 limit is exact (both pieces -> 1).
template <class R>
R symbol_remainder(kernel_kind kind, R q) {
    if (q == R(0)) return R(0);
    return smearing_symbol(kind, q) - symbol_subtractor(kind, q);
}

// Same remainder for an arbitrary constraint profile (double precision).
double symbol_remainder(kernel_kind kind, double q, const constraint_profile& profile);

// --- closed-form transform of the subtractor ------------------------------

template <class R>
R singular_kernel(kernel_kind kind, R xi) {
    using std::pow;
    if (!(xi > R(0))) throw std::domain_error("singular_kernel: need xi > 0 (pointwise value undefined at 0)");
    const auto k = bessel_k_quarters(xi);
    if (kind == kernel_kind::phi) {
        static const R pref = pow(R(2), real_const<R>("0.75")) / gamma_fn(real_const<R>("0.25"));
        return pref * k.k14 / pow(xi, real_const<R>("0.25"));
    }
    static const R pref = pow(R(2), real_const<R>("1.25")) / gamma_fn(real_const<R>("-0.25"));
    return pref * k.k34 / pow(xi, real_const<R>("0.75"));
}

// d/dxi of the singular kernel, from d/dz [z^-nu K_nu(z)] = -z^-nu K_{nu+1}(z).
template <class R>
R singular_kernel_deriv(kernel_kind kind, R xi) {
    using std::pow;
    if (!(xi > R(0))) throw std::domain_error("singular_kernel_deriv: need xi > 0");
    if (kind == kernel_kind::phi) {
        static const R pref = pow(R(2), real_const<R>("0.75")) / gamma_fn(real_const<R>("0.25"));
        return -pref * bessel_k54(xi) / pow(xi, real_const<R>("0.25"));
    }
    static const R pref = pow(R(2), real_const<R>("1.25")) / gamma_fn(real_const<R>("-0.25"));
    return -pref * bessel_k74(xi) / pow(xi, real_const<R>("0.75"));
}

// --- numerical transform of the remainder ---------------------------------

// Large-q expansion of the remainder once alpha has saturated at Lambda:
//   rem(q) = sum_j c_j q^{-p_j},  c_j = -binom(e, j),  p_j = 2j -+ ... :
//   phi: e = -1/4, p_j = 2j + 1/2;  pi: e = +1/4, p_j = 2j - 1/2.
struct tail_term {
    double c;
    double p;
};
std::vector<tail_term> remainder_tail_terms(kernel_kind kind, int jmax = 8);

struct transform_point {
    double value;
    double error;  // quadrature-difference estimate + truncation floor
};

// mu2(xi) = sqrt(2/pi) [ int_0^{k_max} cos(q xi) rem(q) dq + analytic tail ].
// Asserts that the remainder actually decays near k_max before integrating.
transform_point remainder_ft(kernel_kind kind, double xi, const constraint_profile& profile,
                             int order = 16);

// d mu2/dxi = -sqrt(2/pi) [ int_0^{k_max} q sin(q xi) rem(q) dq + tail ].
transform_point remainder_ft_deriv(kernel_kind kind, double xi, const constraint_profile& profile,
                                   int order = 16);

// Extended-precision core quadrature (analytic profile only); the algebraic
// tail stays in double, whose ~1e-21 absolute floor is far below need.
double remainder_ft_extended(kernel_kind kind, double xi);

// --- total kernel -----------------------------------------------------------

struct kernel_sample {
    double x;         // physical position
    double lambda_x;  // xi = Lambda * x
    double singular;
    double regular;
    double total;
    double err;
    int sign;  // sign of total (mu_pi oscillates)
};

kernel_sample total_kernel(kernel_kind kind, double x, const constraint_profile& profile,
                           int order = 16);

// Grid driver; throws numerics_error naming the worst x if any error bar
// exceeds err_tol.
std::vector<kernel_sample> kernel_table(kernel_kind kind, const std::vector<double>& x_grid,
                                        const constraint_profile& profile, double err_tol,
                                        int order = 16);

// d/dxi of the total kernel shape at Lambda = 1 (analytic profile).
double total_kernel_deriv(kernel_kind kind, double xi, const constraint_profile& profile,
                          int order = 16);

// --- Hadamard finite-part pairing of the singular pi kernel ----------------

// <mu1_pi, f> = lim_{eps->0} [ int_{|x|>eps} mu1_pi(Lambda x) f(x) dx
//                              + 2 Lambda^{-3/2} eps^{-1/2} f(0) ],
// evaluated on eps_j = 2^{-j}, j = 4..20, and extrapolated by a least-squares
// fit in powers of sqrt(eps): I(eps) = I0 + a sqrt(eps) + b eps + c eps^{3/2}.
struct pairing_fit {
    double value;
    double error;  // fit residual estimate
    std::vector<double> eps;
    std::vector<double> regulated;  // I(eps_j)
};
pairing_fit hadamard_pairing(const std::function<double(double)>& f, double f_at_0,
                             double lambda = 1.0);

// --- integral-equation residual for mu_phi ---------------------------------

// The constraint ODE in momentum space is equivalent to
//   x mu' + 1/2 mu + (1/sqrt(2 pi)) (ghat * mu)(x) = 0,
// with ghat(x) = sqrt(sigma/8) exp(-sigma x^2/4) the transform of the
// entangler profile (Lambda = 1).  The convolution against the integrable
// |y|^{-1/2} singularity is tamed by the substitution y = t^2.  Only the phi
// kernel is supported: the pi kernel's |y|^{-3/2} singularity makes the
// convolution itself a finite-part object.
struct residual_sample {
    double x;
    double term_deriv;  // x mu'
    double term_half;   // mu/2
    double term_conv;   // (ghat * mu)/sqrt(2 pi)
    double residual;
    double rel;  // |residual| / max(|terms|)
};
std::vector<residual_sample> integral_equation_residual(const std::vector<double>& xs,
                                                        int conv_order = 240);

// --- asymptotic decay law ---------------------------------------------------

// u(xi) = xi sqrt(sigma ln xi); the kernel obeys |mu_phi| = exp(-u(xi) + o(u)).
struct decay_fit {
    bool applicable = true;
    std::vector<double> xi;
    std::vector<double> u_hat;  // -ln|mu_phi|
    std::vector<double> ratio;  // u_hat / u
    double ratio_lo = 0, ratio_hi = 0;
    bool ratio_drifts_toward_one = false;
    double fitted_exp_rate = 0;   // LS slope of u_hat vs xi (pure exponential would be ~1)
    double fitted_law_slope = 0;  // LS slope of u_hat vs u(xi), offset allowed
    int pi_sign_changes = 0;      // counted on the same window
};

// Scans the analytic-profile kernel on n log-spaced points of [xi_lo, xi_hi];
// extended_core selects the extended-precision remainder transform (needed
// beyond xi ~ 10 where double-precision cancellation reaches percent level).
decay_fit decay_law_fit(double xi_lo, double xi_hi, int n, bool extended_core);

// CFT profile: the kernel is a delta distribution; nothing to fit.
decay_fit decay_law_fit_cft();

}  // namespace cmera
