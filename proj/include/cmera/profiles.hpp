#pragma once
// Entangler profile g(k), constraint profile alpha(k), the first-order ODE
// linking them, and the sharp-cutoff variants.
//
// Conventions (momentum units of the cutoff Lambda):
//   g(k)     = 1/2 exp(-(k/Lambda)^2 / sigma),  sigma = e^gamma
//   alpha(k) = Lambda exp( 1/2 Ei(-(k/Lambda)^2 / sigma) )
//   k alpha'(k) = 2 g(k) alpha(k)
// alpha interpolates between |k| as k -> 0 (massless vacuum) and Lambda as
// |k| -> infinity (unentangled product state).  The sharp variants replace g
// by a step at |k| = Lambda, under which alpha becomes min(|k|, Lambda).

#include <cstddef>
#include <vector>

#include "cmera/precision.hpp"
#include "cmera/specfun.hpp"

namespace cmera {

enum class entangler_variant { smooth_gaussian, sharp };

struct entangler_profile {
    double lambda = 1.0;
    double sigma = 1.7810724179901979852;  // e^gamma
    entangler_variant variant = entangler_variant::smooth_gaussian;
};

template <class R>
inline R entangler_g_smooth(R k, R lambda) {
    using std::exp;
    const R r = k / lambda;
    return exp(-r * r / sigma_v<R>) / R(2);
}

// Dispatches on the variant; the sharp step takes the value 1/2 on the closed
// interval |k| <= Lambda.
double entangler_g(const entangler_profile& p, double k);

template <class R>
inline R alpha_analytic(R k, R lambda = R(1)) {
    using std::abs;
    using std::exp;
    if (k == R(0)) return R(0);
    const R r = abs(k) / lambda;
    const R y = r * r / sigma_v<R>;
    return lambda * exp(expint_ei(-y) / R(2));
}

// d alpha / dk for k > 0, from the defining relation k alpha' = 2 g alpha.
// The k -> 0 limit is 1 (alpha = |k| + O(k^3)).
template <class R>
inline R alpha_analytic_prime(R k, R lambda = R(1)) {
    using std::abs;
    if (k == R(0)) return R(1);
    return R(2) * entangler_g_smooth(abs(k), lambda) * alpha_analytic(k, lambda) / abs(k);
}

inline double sharp_alpha(double k, double lambda = 1.0) {
    const double a = std::abs(k);
    return a < lambda ? a : lambda;
}

// ---------------------------------------------------------------------------
// Constraint profile as a runtime value usable by the correlator and kernel
// drivers.  Evaluation is even in k by construction.

enum class profile_provenance {
    analytic_ei,        // alpha from the closed Ei form
    sharp_fixed_point,  // alpha = min(|k|, Lambda)
    cft,                // alpha = |k|; correlator code applies its IR policy
    ode_solved,         // sampled solution of the constraint ODE
    flow_snapshot,      // sharp-cutoff flow at finite s_IR (three regimes)
};

struct constraint_profile {
    profile_provenance provenance = profile_provenance::analytic_ei;
    double lambda = 1.0;
    double s_ir = 0.0;           // flow_snapshot only
    std::vector<double> grid_k;  // ode_solved only (ascending, positive)
    std::vector<double> grid_alpha;
    std::vector<double> grid_err;  // per-point local error estimates

    double operator()(double k) const;
};

constraint_profile make_analytic_profile(double lambda = 1.0);
constraint_profile make_sharp_profile(double lambda = 1.0);
constraint_profile make_cft_profile(double lambda = 1.0);
constraint_profile make_flow_snapshot_profile(double s_ir, double lambda = 1.0);

// ---------------------------------------------------------------------------
// ODE solve of k alpha' = 2 g alpha across a positive, increasing grid from an
// anchor (k0, alpha0); the integration runs in u = log k where the equation
// reads d alpha/du = 2 g(e^u) alpha and is regular.  The sharp variant is
// integrated separately on each side of |k| = Lambda and matched there, so no
// step straddles the discontinuity of g.  grid_err carries a local error
// estimate per point (difference of two integrator tolerances).
constraint_profile alpha_ode_solve(const entangler_profile& entangler,
                                   const std::vector<double>& k_grid,
                                   double anchor_k, double anchor_alpha);

// Convenience for the equivalence check: solves the ODE anchored at
// (k_lo, alpha_analytic(k_lo)) on a log grid of n points spanning
// [k_lo, k_hi] and returns max |alpha_ode - alpha_analytic| / alpha_analytic.
double alpha_ode_max_rel_deviation(double k_lo, double k_hi, int n,
                                   double lambda = 1.0);

}  // namespace cmera
