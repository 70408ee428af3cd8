#pragma once
// Two-point functions of the Gaussian state selected by a constraint profile,
// Wick-composed correlators of composite operators (stress tensor, vertex
// operators), and extraction of conformal data (Delta, s, c, OPE
// normalization) from their large-distance behavior.
//
// Momentum-space covariances of the state (diagonal kernels):
//   <phi phi>(k) = 1/(2 alpha),  <pi pi>(k) = alpha/2,  <phi pi>(k) = i/2.
// The right/left movers are dphi = (d_x phi - pi)/2, dbar = (d_x phi + pi)/2;
// their even-in-k symbols are assembled from the covariances, with the pure
// large-k power pieces removed (their pointwise finite part vanishes for
// x != 0, so the subtracted quadrature is exact away from contact terms).

#include <functional>
#include <vector>

#include "cmera/profiles.hpp"

namespace cmera {

struct gaussian_state {
    constraint_profile profile;
    double ir_cutoff = 0.0;  // k_IR momentum exclusion; 0 = none
};

enum class correlator_kind {
    phi_phi_subtracted,  // <phi(x)phi(0)> - <phi(x_ref)phi(0)> (IR-safe difference)
    dphi_dphi,
    dbar_dbar,
    mixed_dphi_dbar,
    stress_stress,
    vertex,
};

struct correlator_table {
    correlator_kind kind;
    double nu = 0.0;    // vertex charge, when applicable
    double k_ir = 0.0;  // vertex regulator, when applicable
    std::vector<double> separations;  // physical x, ascending
    std::vector<double> values;
    std::vector<double> errors;  // quadrature truncation estimates
};

// --- covariance kernels (momentum space, physical k) ------------------------

double phi_covariance(const constraint_profile&, double k);  // 1/(2 alpha)
double pi_covariance(const constraint_profile&, double k);   // alpha/2
// <phi pi> is identically i/2 (canonical); the product of the two real
// kernels is the purity floor 1/4, asserted in tests.

// --- field correlators ------------------------------------------------------

// <dphi(x) dphi(0)>; finite at x = 0 for decaying profiles; the
// scale-invariant profile gives -1/(4 pi x^2) in closed form (throws at 0).
double corr_dphi_dphi(const gaussian_state&, double x, int order = 16);
double corr_dbar_dbar(const gaussian_state&, double x, int order = 16);  // = dphi by parity
// <dphi(x) dbar(0)>: identically 0 for the scale-invariant profile; decays
// faster than dphi_dphi for decaying profiles (spin consistency).
double corr_mixed(const gaussian_state&, double x, int order = 16);
// <T(x)T(0)> with T = -2 pi :dphi dphi:, by Wick = 8 pi^2 corr_dphi_dphi^2.
double corr_TT(const gaussian_state&, double x, int order = 16);
// <phi(x)phi(0)> - <phi(x_ref)phi(0)>: the difference is IR-finite; the
// large-k constant of the covariance drops by Abel regularization.
double corr_phi_phi_subtracted(const gaussian_state&, double x, double x_ref);

// --- vertex operators -------------------------------------------------------

// Regulated <phi(x)phi(0)> = (1/2pi) int_{|k|>k_ir} e^{ikx}/(2 alpha) dk.
// Requires x*k_ir < 0.1 (fit window must sit far below the regulator scale).
double vertex_g_reg(const gaussian_state&, double x, double k_ir);
// <:e^{i nu phi}(x): :e^{-i nu phi}(0):> = exp(nu^2 G_reg); nu = 0 gives 1.
double vertex_correlator(const gaussian_state&, double nu, double x, double k_ir);

// --- tables and fits --------------------------------------------------------

correlator_table tabulate(const gaussian_state&, correlator_kind,
                          const std::vector<double>& xs, double nu = 0.0,
                          double k_ir = 0.0, double x_ref = 1.0);

struct power_fit {
    double delta;      // |value| ~ amplitude / x^{2 delta}
    double amplitude;
    double r_squared;  // weighted, on the log-log samples
};

// Weighted least squares of log|value| against log x (weights from the error
// bars); throws numerics_error when linearity is poor (r^2 < r2_min).
power_fit dimension_fit(const correlator_table&, double r2_min = 0.999);
power_fit vertex_dimension_fit(double nu, const correlator_table&, double r2_min = 0.999);

// Plateau average of c(x) = 2 x^4 <TT> over the table; throws numerics_error
// when the plateau spread exceeds 5%.
double central_charge_fit(const correlator_table&);

// |corr_mixed| / |corr_dphi_dphi| at x: the mixed channel must be
// subdominant (conformal-spin decomposition at correlator level).
double spin_decomposition_ratio(const gaussian_state&, double x);

// --- cross-check against the real-space smearing kernels --------------------

// The state's phi correlator equals the kernel-smeared CFT correlator.  At
// single-smearing level: <(V^dag phi V)(x) phi(0)>_CFT with symbol
// sqrt(k/alpha)/(2k), once through real space (finite-part pairing of the
// pi-type kernel against -ln|x-w|/(2pi)) and once through momentum space.
struct smear_check {
    double x, x_ref;
    double real_space;  // pairing route, differenced x vs x_ref
    double momentum;    // symbol quadrature route
};
smear_check smeared_phi_crosscheck(double x, double x_ref);

// --- summary ----------------------------------------------------------------

struct fit_window {
    double lo, hi;  // in units of lambda*x
    int n;
};

struct conformal_summary {
    double delta_dphi, amplitude, r_squared;
    double ope_coefficient;  // 4 pi * amplitude, -> 1
    double central_charge;
    double spin_ratio;  // |mixed|/|dphi| at the window's upper edge
    std::vector<double> vertex_nu, vertex_delta, vertex_delta_expected;
    std::vector<double> vertex_delta_shift;  // 10x k_ir sweep, relative
    fit_window window, vertex_window;
    double vertex_k_ir;
};

conformal_summary conformal_data(const gaussian_state&, const fit_window& dphi_window,
                                 const fit_window& vertex_window, double vertex_k_ir,
                                 const std::vector<double>& nus);

}  // namespace cmera
