#pragma once
// Quadrature and ODE-stepping utilities shared by the physics modules:
//   * gauss_legendre(n)        -- nodes/weights on (-1, 1), cached per order
//   * integrate_fixed          -- single Gauss-Legendre panel
//   * integrate                -- globally adaptive integration, GL 15/31 pair
//   * cosine/sine_transform    -- \int_0^K trig(x k) f(k) dk by half-period panels
//   * power_tail               -- Re/Im \int_z^inf t^{-p} e^{i t} dt
//   * ode_solve_dp54           -- adaptive Dormand-Prince 5(4), scalar ODE
// Everything except power_tail is templated on the real type; the oscillatory
// tail is evaluated once in complex double arithmetic, which keeps its
// absolute error near 1e-21 -- far below what any caller resolves.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cmera/precision.hpp"
#include "cmera/specfun.hpp"

namespace cmera {

template <class R>
struct quadrature_rule {
    std::vector<R> nodes;    // ascending, on (-1, 1)
    std::vector<R> weights;  // positive, sum to 2
};

// Gauss-Legendre rule of the requested order, computed by Newton iteration on
// the three-term Legendre recurrence from Chebyshev initial guesses.  Rules
// are cached per (type, order); computing one is O(order^2) evaluations.
template <class R>
inline const quadrature_rule<R>& gauss_legendre(int n) {
    static std::map<int, quadrature_rule<R>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    if (n < 1) throw std::domain_error("gauss_legendre: order must be >= 1");

    using std::abs;
    using std::cos;
    quadrature_rule<R> rule;
    rule.nodes.assign(n, R(0));
    rule.weights.assign(n, R(0));
    const R eps = std::numeric_limits<R>::epsilon();
    for (int i = 0; i < (n + 1) / 2; ++i) {
        R x = real_const<R>("-1") *
              cos(pi_v<R> * (R(i) + real_const<R>("0.75")) / (R(n) + real_const<R>("0.5")));
        R pn{}, dpn{};
        for (int iter = 0; iter < 200; ++iter) {
            R p0 = R(1), p1 = x;
            for (int k = 2; k <= n; ++k) {
                R p2 = ((R(2 * k - 1) * x * p1) - R(k - 1) * p0) / R(k);
                p0 = p1;
                p1 = p2;
            }
            pn = (n == 1) ? x : p1;
            R pm1 = (n == 1) ? R(1) : p0;
            dpn = R(n) * (x * pn - pm1) / (x * x - R(1));
            const R dx = pn / dpn;
            x -= dx;
            if (abs(dx) <= R(4) * eps * abs(x) + eps) break;
        }
        const R w = R(2) / ((R(1) - x * x) * dpn * dpn);
        rule.nodes[i] = x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = -x;
        rule.weights[n - 1 - i] = w;
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

// One Gauss-Legendre panel over [a, b].
template <class R, class F>
inline R integrate_fixed(F&& f, R a, R b, int order) {
    const auto& rule = gauss_legendre<R>(order);
    const R half = (b - a) / R(2);
    const R mid = (b + a) / R(2);
    R sum = R(0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

namespace detail {

template <class R, class F>
inline std::pair<R, R> panel_estimate(F& f, R a, R b) {
    using std::abs;
    const R coarse = integrate_fixed(f, a, b, 15);
    const R fine = integrate_fixed(f, a, b, 31);
    return {fine, abs(fine - coarse)};
}

}  // namespace detail

// Globally adaptive integration: the interval with the largest error estimate
// is bisected until the summed estimates meet max(abs_tol, rel_tol*|result|).
template <class R, class F>
inline R integrate(F&& f, R a, R b, R abs_tol, R rel_tol, int max_panels = 4000) {
    using std::abs;
    struct segment {
        R a, b, value, error;
    };
    auto worse = [](const segment& s, const segment& t) { return s.error < t.error; };

    std::vector<segment> heap;
    auto [v0, e0] = detail::panel_estimate(f, a, b);
    heap.push_back({a, b, v0, e0});
    R total_value = v0, total_error = e0;
    while (static_cast<int>(heap.size()) < max_panels) {
        if (total_error <= abs_tol || total_error <= rel_tol * abs(total_value)) break;
        std::pop_heap(heap.begin(), heap.end(), worse);
        const segment s = heap.back();
        heap.pop_back();
        const R mid = (s.a + s.b) / R(2);
        auto [vl, el] = detail::panel_estimate(f, s.a, mid);
        auto [vr, er] = detail::panel_estimate(f, mid, s.b);
        total_value += vl + vr - s.value;
        total_error += el + er - s.error;
        heap.push_back({s.a, mid, vl, el});
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back({mid, s.b, vr, er});
        std::push_heap(heap.begin(), heap.end(), worse);
    }
    if (total_error > abs_tol && total_error > rel_tol * abs(total_value))
        throw numerics_error("integrate: adaptive refinement did not converge");
    R sum = R(0);
    for (const auto& s : heap) sum += s.value;
    return sum;
}

namespace detail {

// Shared driver for the trig transforms: panels are cut at the zeros of the
// oscillatory factor (half periods) and additionally capped at a width the
// Gauss rule resolves for slowly varying f.
template <class R, class Trig, class F>
inline R oscillatory_transform(Trig&& trig, F&& f, R upper, R x, int order) {
    using std::abs;
    if (!(upper > R(0))) return R(0);
    if (order <= 0) order = working_digits<R>() >= 30 ? 32 : 16;

    const R max_width = real_const<R>("0.7");
    std::vector<R> edges;
    edges.push_back(R(0));
    if (abs(x) * upper > pi_v<R>) {
        // zeros of cos(x k) at (j + 1/2) pi / x; of sin(x k) at j pi / x.
        // Either set spaces panels one half period apart, which is all the
        // panel decomposition needs, so use the cosine zeros for both.
        const R step = pi_v<R> / abs(x);
        for (R z = step / R(2); z < upper; z += step)
            if (z > edges.back()) edges.push_back(z);
    }
    edges.push_back(upper);

    R sum = R(0);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const R a = edges[i], b = edges[i + 1];
        const R ratio = (b - a) / max_width;
        const int chunks = std::max(1, static_cast<int>(static_cast<double>(ratio)) + 1);
        const R w = (b - a) / R(chunks);
        for (int c = 0; c < chunks; ++c) {
            const R ca = a + R(c) * w;
            auto g = [&](R k) { return trig(x * k) * f(k); };
            sum += integrate_fixed(g, ca, ca + w, order);
        }
    }
    return sum;
}

}  // namespace detail

// \int_0^upper cos(x k) f(k) dk for smooth f; exact half-period panelling
// keeps the cost linear in x*upper and the accuracy at the Gauss level.
template <class R, class F>
inline R cosine_transform(F&& f, R upper, R x, int order = 0) {
    using std::cos;
    return detail::oscillatory_transform([](R t) { return cos(t); },
                                         std::forward<F>(f), upper, x, order);
}

// \int_0^upper sin(x k) f(k) dk.
template <class R, class F>
inline R sine_transform(F&& f, R upper, R x, int order = 0) {
    using std::sin;
    return detail::oscillatory_transform([](R t) { return sin(t); },
                                         std::forward<F>(f), upper, x, order);
}

// Oscillatory power tail: cosine = \int_z^inf t^{-p} cos t dt and
// sine = the same with sin t, i.e. Re/Im of z^{1-p} E_p(-i z).
struct tail_pair {
    double cosine;
    double sine;
};

namespace detail {

// E_p(w) by the modified Lentz continued fraction,
//   E_p(w) = e^{-w} / (w + p - 1 p / (w + p + 2 - 2 (p+1) / (w + p + 4 - ...))),
// valid away from the negative real axis; here w = -i z sits on the imaginary
// axis where convergence needs z not far below p.
inline std::complex<double> expint_cf(double p, std::complex<double> w) {
    const std::complex<double> tiny(1e-300, 0.0);
    std::complex<double> b = w + p;
    std::complex<double> c = 1.0 / tiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i < 400; ++i) {
        const std::complex<double> a(-double(i) * (p + i - 1.0), 0.0);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return std::exp(-w) * h;
    }
    throw numerics_error("power_tail: continued fraction did not converge");
}

}  // namespace detail

inline tail_pair power_tail(double p, double z) {
    if (!(z > 0.0)) throw std::domain_error("power_tail: need z > 0");
    if (z >= std::max(3.0, 1.2 * p)) {
        const std::complex<double> val =
            std::pow(z, 1.0 - p) * detail::expint_cf(p, std::complex<double>(0.0, -z));
        return {val.real(), val.imag()};
    }
    // Convergent expansion of the full integral about z = 0; the constant is
    // the z -> 0 limit \int_0^inf t^{-p} e^{it} dt = Gamma(1-p) e^{i pi (1-p)/2}.
    const double A = gamma_fn(1.0 - p);
    double si = 0.0, sj = 0.0, sign = 1.0, f2m = 1.0, f2m1 = 1.0;
    for (int m = 0; m < 64; ++m) {
        if (m > 0) {
            f2m *= (2 * m - 1) * (2 * m);
            f2m1 *= (2 * m) * (2 * m + 1);
        }
        si += sign * std::pow(z, 2 * m + 1 - p) / (f2m * (2 * m + 1 - p));
        sj += sign * std::pow(z, 2 * m + 2 - p) / (f2m1 * (2 * m + 2 - p));
        sign = -sign;
    }
    const double half_pi = 0.5 * 3.14159265358979323846;
    return {A * std::cos(half_pi * (1.0 - p)) - si, A * std::sin(half_pi * (1.0 - p)) - sj};
}

// Adaptive Dormand-Prince 5(4) for a scalar ODE dy/du = f(u, y), integrating
// from u0 to u1 (either direction) and returning y(u1).
template <class R, class F>
inline R ode_solve_dp54(F&& f, R u0, R u1, R y0, R rel_tol, R abs_tol) {
    using std::abs;
    using std::pow;
    if (u0 == u1) return y0;
    const R dir = (u1 > u0) ? R(1) : R(-1);
    R u = u0, y = y0;
    const R span = abs(u1 - u0);
    R h = dir * std::min(span, R(1)) / R(16);
    const int max_steps = 200000;
    for (int step = 0; step < max_steps; ++step) {
        if ((u - u1) * dir >= R(0)) return y;
        if ((u + h - u1) * dir > R(0)) h = u1 - u;

        const R k1 = f(u, y);
        const R k2 = f(u + h / R(5), y + h * (k1 / R(5)));
        const R k3 = f(u + h * R(3) / R(10),
                       y + h * (R(3) / R(40) * k1 + R(9) / R(40) * k2));
        const R k4 = f(u + h * R(4) / R(5),
                       y + h * (R(44) / R(45) * k1 - R(56) / R(15) * k2 + R(32) / R(9) * k3));
        const R k5 = f(u + h * R(8) / R(9),
                       y + h * (R(19372) / R(6561) * k1 - R(25360) / R(2187) * k2 +
                                R(64448) / R(6561) * k3 - R(212) / R(729) * k4));
        const R k6 = f(u + h, y + h * (R(9017) / R(3168) * k1 - R(355) / R(33) * k2 +
                                       R(46732) / R(5247) * k3 + R(49) / R(176) * k4 -
                                       R(5103) / R(18656) * k5));
        const R y5 = y + h * (R(35) / R(384) * k1 + R(500) / R(1113) * k3 +
                              R(125) / R(192) * k4 - R(2187) / R(6784) * k5 +
                              R(11) / R(84) * k6);
        const R k7 = f(u + h, y5);
        const R err_raw = h * (R(71) / R(57600) * k1 - R(71) / R(16695) * k3 +
                               R(71) / R(1920) * k4 - R(17253) / R(339200) * k5 +
                               R(22) / R(525) * k6 - R(1) / R(40) * k7);
        const R ay = abs(y), ay5 = abs(y5);
        const R scale = abs_tol + rel_tol * std::max(ay, ay5);
        const R err = abs(err_raw) / scale;
        if (err <= R(1)) {
            u += h;
            y = y5;
        }
        const R grow = real_const<R>("0.9") * pow(std::max(err, real_const<R>("1e-10")),
                                                  real_const<R>("-0.2"));
        h *= std::min(R(5), std::max(real_const<R>("0.2"), grow));
    }
    throw numerics_error("ode_solve_dp54: step limit exceeded");
}

}  // namespace cmera
