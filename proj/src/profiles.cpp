#include "cmera/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmera/quadrature.hpp"

namespace cmera {

double entangler_g(const entangler_profile& p, double k) {
    const double a = std::abs(k);
    if (p.variant == entangler_variant::sharp) return a <= p.lambda ? 0.5 : 0.0;
    return entangler_g_smooth(a, p.lambda);
}

// ---------------------------------------------------------------------------

namespace {

// Log-log linear interpolation over the solved grid; below the first node the
// profile continues as alpha ~ k (exact slope of the IR asymptote), above the
// last node it has saturated at its boundary value.
double interp_loglog(const std::vector<double>& ks, const std::vector<double>& as,
                     double k) {
    if (k <= ks.front()) return as.front() * (k / ks.front());
    if (k >= ks.back()) return as.back();
    const auto it = std::upper_bound(ks.begin(), ks.end(), k);
    const std::size_t i = static_cast<std::size_t>(it - ks.begin()) - 1;
    const double t = std::log(k / ks[i]) / std::log(ks[i + 1] / ks[i]);
    return as[i] * std::exp(t * std::log(as[i + 1] / as[i]));
}

}  // namespace

double constraint_profile::operator()(double k) const {
    const double a = std::abs(k);
    switch (provenance) {
        case profile_provenance::analytic_ei:
            return alpha_analytic(a, lambda);
        case profile_provenance::sharp_fixed_point:
            return sharp_alpha(a, lambda);
        case profile_provenance::cft:
            return a;
        case profile_provenance::flow_snapshot:
            // Flow from the product state toward min(|k|, Lambda): after
            // flowing to s <= 0, modes above Lambda e^s have reached the fixed
            // point and the rest still carry the flowing cutoff value.
            return std::max(std::min(a, lambda), lambda * std::exp(s_ir));
        case profile_provenance::ode_solved:
            if (grid_k.empty())
                throw std::logic_error("constraint_profile: empty ODE grid");
            if (a == 0.0) return 0.0;
            return interp_loglog(grid_k, grid_alpha, a);
    }
    throw std::logic_error("constraint_profile: bad provenance");
}

constraint_profile make_analytic_profile(double lambda) {
    constraint_profile p;
    p.provenance = profile_provenance::analytic_ei;
    p.lambda = lambda;
    return p;
}

constraint_profile make_sharp_profile(double lambda) {
    constraint_profile p;
    p.provenance = profile_provenance::sharp_fixed_point;
    p.lambda = lambda;
    return p;
}

constraint_profile make_cft_profile(double lambda) {
    constraint_profile p;
    p.provenance = profile_provenance::cft;
    p.lambda = lambda;
    return p;
}

constraint_profile make_flow_snapshot_profile(double s_ir, double lambda) {
    if (s_ir > 0.0)
        throw std::invalid_argument("flow snapshot: s_ir must be <= 0");
    constraint_profile p;
    p.provenance = profile_provenance::flow_snapshot;
    p.lambda = lambda;
    p.s_ir = s_ir;
    return p;
}

// ---------------------------------------------------------------------------

namespace {

// One adaptive integration of d(alpha)/du = 2 g(e^u) alpha from u0 to u1.
// For the sharp entangler the right-hand side jumps at u = log Lambda, so a
// straddling segment is split there and the two halves are integrated
// separately; within each half g is smooth (constant, in fact).
double advance(const entangler_profile& ent, double u0, double u1, double a0,
               double rtol, double atol) {
    const auto rhs = [&](double u, double a) {
        return 2.0 * entangler_g(ent, std::exp(u)) * a;
    };
    if (ent.variant == entangler_variant::sharp) {
        const double uc = std::log(ent.lambda);
        if ((u0 - uc) * (u1 - uc) < 0.0) {
            const double mid = ode_solve_dp54(rhs, u0, uc, a0, rtol, atol);
            return ode_solve_dp54(rhs, uc, u1, mid, rtol, atol);
        }
    }
    return ode_solve_dp54(rhs, u0, u1, a0, rtol, atol);
}

}  // namespace

constraint_profile alpha_ode_solve(const entangler_profile& entangler,
                                   const std::vector<double>& k_grid,
                                   double anchor_k, double anchor_alpha) {
    if (k_grid.empty()) throw std::invalid_argument("alpha_ode_solve: empty grid");
    if (!(anchor_k > 0.0) || !(anchor_alpha > 0.0))
        throw std::invalid_argument("alpha_ode_solve: anchor must be positive");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!(k_grid[i] > 0.0))
            throw std::invalid_argument("alpha_ode_solve: grid must be positive");
        if (i && !(k_grid[i] > k_grid[i - 1]))
            throw std::invalid_argument("alpha_ode_solve: grid must be increasing");
    }

    const double rtol = 1e-11, atol = 1e-15;
    const std::size_t n = k_grid.size();
    std::vector<double> alpha(n), err(n);

    // Walk outward from the anchor in u = log k, carrying the solution (and a
    // shadow solution at 30x tighter tolerance whose deviation is the local
    // error estimate).
    const auto sweep = [&](std::size_t first, bool upward) {
        double u_prev = std::log(anchor_k);
        double a = anchor_alpha, a_fine = anchor_alpha;
        std::size_t i = first;
        while (true) {
            const double u = std::log(k_grid[i]);
            a = advance(entangler, u_prev, u, a, rtol, atol);
            a_fine = advance(entangler, u_prev, u, a_fine, rtol / 30, atol / 30);
            alpha[i] = a;
            err[i] = std::abs(a - a_fine);
            u_prev = u;
            if (upward) {
                if (++i == n) break;
            } else {
                if (i == 0) break;
                --i;
            }
        }
    };

    // First grid index at or above the anchor.
    const std::size_t split = static_cast<std::size_t>(
        std::lower_bound(k_grid.begin(), k_grid.end(), anchor_k) - k_grid.begin());
    if (split < n) sweep(split, true);
    if (split > 0) sweep(split - 1, false);

    constraint_profile p;
    p.provenance = profile_provenance::ode_solved;
    p.lambda = entangler.lambda;
    p.grid_k = k_grid;
    p.grid_alpha = std::move(alpha);
    p.grid_err = std::move(err);
    return p;
}

double alpha_ode_max_rel_deviation(double k_lo, double k_hi, int n, double lambda) {
    std::vector<double> ks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ks[static_cast<std::size_t>(i)] =
            k_lo * std::pow(k_hi / k_lo, double(i) / double(n - 1));
    entangler_profile ent;
    ent.lambda = lambda;
    const constraint_profile p =
        alpha_ode_solve(ent, ks, k_lo, alpha_analytic(k_lo, lambda));
    double worst = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double ref = alpha_analytic(ks[i], lambda);
        worst = std::max(worst, std::abs(p.grid_alpha[i] - ref) / ref);
    }
    return worst;
}

}  // namespace cmera
