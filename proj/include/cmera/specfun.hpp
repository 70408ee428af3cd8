#pragma once
// Special functions needed by the constraint-profile and kernel machinery:
//   * gamma_fn      -- Gamma function (Spouge's approximation + reflection)
//   * expint_ei     -- exponential integral Ei on the real line
//   * bessel_k_quarters -- modified Bessel K of orders 1/4 and 3/4 as a pair
// All are templated on the real type; accuracy targets follow the type's
// digits10.  Methods: power series where they converge without catastrophic
// cancellation, continued fractions (modified Lentz) elsewhere.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cmera/precision.hpp"

namespace cmera {

namespace detail {

// Bring standard math into scope so boost multiprecision types resolve via ADL.
using std::abs;
using std::cos;
using std::cosh;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sinh;
using std::sqrt;

template <class R>
R eps_of() {
    return std::numeric_limits<R>::epsilon();
}

// ---------------------------------------------------------------------------
// Gamma via Spouge's formula:
//   Gamma(x+1) = (x+a)^{x+1/2} e^{-(x+a)} [ sqrt(2 pi) + sum_{k=1}^{a-1} c_k/(x+k) ]
//   c_k = (-1)^{k-1}/(k-1)! (a-k)^{k-1/2} e^{a-k}
// The term count a is chosen from the target precision: the relative error is
// bounded by a^{-1/2} (2 pi)^{-(a+1/2)}.
// ---------------------------------------------------------------------------
template <class R>
struct spouge_table {
    int a;
    std::vector<R> c;
    spouge_table() {
        const double digits = working_digits<R>() + 3;
        a = static_cast<int>(digits * 2.302585 / 1.8378771) + 3;
        c.resize(a);
        R fact = R(1);
        for (int k = 1; k < a; ++k) {
            if (k > 1) fact *= R(k - 1);
            const R ak = R(a - k);
            c[k] = pow(ak, R(k) - real_const<R>("0.5")) * exp(ak) / fact;
            if (k % 2 == 0) c[k] = -c[k];
        }
    }
};

template <class R>
R gamma_positive(R x) {
    // requires x >= 0.5
    if constexpr (std::is_floating_point_v<R>) {
        // Lanczos, g = 7, 9 terms: the partial-fraction sum is well conditioned
        // in hardware precision (Spouge's coefficients cancel ~5 digits there).
        static const double lg[9] = {
            0.99999999999980993,   676.5203681218851,   -1259.1392167224028,
            771.32342877765313,    -176.61502916214059, 12.507343278686905,
            -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
        const R z = x - R(1);
        R s = R(lg[0]);
        for (int i = 1; i < 9; ++i) s += R(lg[i]) / (z + R(i));
        const R t = z + R(7.5);
        return sqrt(R(2) * pi_v<R>) * pow(t, z + R(0.5)) * exp(-t) * s;
    } else {
        // Spouge at x-1: the generous digit budget of the software float
        // absorbs the coefficient cancellation.
        static const spouge_table<R> tab;
        const R z = x - R(1);
        R s = sqrt(R(2) * pi_v<R>);
        for (int k = 1; k < tab.a; ++k) s += tab.c[k] / (z + R(k));
        return pow(z + R(tab.a), z + real_const<R>("0.5")) * exp(-(z + R(tab.a))) * s;
    }
}

}  // namespace detail

template <class R>
R gamma_fn(R x) {
    using namespace detail;
    if (x >= real_const<R>("0.5")) return gamma_positive(x);
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x); poles at 0, -1, -2, ...
    // (tested on x itself -- sin(pi x) in floating point misses exact zeros).
    if (x == floor(x)) throw std::domain_error("gamma_fn: pole at nonpositive integer");
    const R s = sin(pi_v<R> * x);
    return pi_v<R> / (s * gamma_positive(R(1) - x));
}

// ---------------------------------------------------------------------------
// Exponential integral Ei(x) = -PV int_{-x}^inf e^{-t}/t dt.
//
// x > 0 : ascending series  Ei = gamma + ln x + sum x^n/(n n!), all terms
//         positive, switched to the asymptotic series e^x/x sum n!/x^n once
//         its optimal-truncation error is below target (x beyond ~digits*2.4).
// x < 0 : Ei(-y) = -E1(y).  The same ascending series alternates and loses
//         roughly 0.43*y decimal digits to cancellation, so its reach is
//         precision-gated: up to y=5 in double, up to y=20 with >=30 digits.
//         Beyond that, the continued fraction
//           E1(y) = e^{-y} / (y+1 - 1^2/(y+3 - 2^2/(y+5 - ...)))
//         is evaluated by the modified Lentz algorithm.
// ---------------------------------------------------------------------------
namespace detail {

template <class R>
R e1_continued_fraction(R y) {
    const R eps = eps_of<R>();
    const R tiny = eps * eps * eps;
    R b = y + R(1);
    R c = R(1) / tiny;
    R d = R(1) / b;
    R h = d;
    for (int i = 1; i < 4000; ++i) {
        const R a = -R(i) * R(i);
        b += R(2);
        d = a * d + b;
        if (abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (abs(c) < tiny) c = tiny;
        d = R(1) / d;
        const R del = c * d;
        h *= del;
        if (abs(del - R(1)) < eps) return h * exp(-y);
    }
    throw std::runtime_error("expint_ei: continued fraction failed to converge");
}

template <class R>
R ei_series(R x) {
    // gamma + ln|x| + sum_{n>=1} x^n / (n n!)
    const R eps = eps_of<R>();
    R sum = R(0), term = R(1);
    for (int n = 1; n < 10000; ++n) {
        term *= x / R(n);
        const R add = term / R(n);
        sum += add;
        if (abs(add) < eps * (abs(sum) + R(1))) break;
    }
    return euler_gamma_v<R> + log(abs(x)) + sum;
}

template <class R>
R ei_asymptotic(R x) {
    // e^x/x * sum_{n>=0} n!/x^n, truncated at the smallest term
    R sum = R(1), term = R(1);
    for (int n = 1; n < 1000; ++n) {
        const R next = term * R(n) / x;
        if (abs(next) >= abs(term)) break;
        term = next;
        sum += term;
        if (abs(term) < eps_of<R>() * abs(sum)) break;
    }
    return exp(x) / x * sum;
}

}  // namespace detail

template <class R>
R expint_ei(R x) {
    using namespace detail;
    if (x == R(0)) throw std::domain_error("expint_ei: singular at 0");
    if (x > R(0)) {
        const R asym = R(std::max(40.0, working_digits<R>() * 2.4));
        return (x > asym) ? ei_asymptotic(x) : ei_series(x);
    }
    const R y = -x;
    // The alternating series sheds ~0.87*y digits to cancellation, so hand
    // over to the continued fraction early in hardware precision.
    const R series_reach = (working_digits<R>() >= 30) ? R(20) : real_const<R>("2.5");
    if (y <= series_reach) return ei_series(x);
    return -e1_continued_fraction(y);
}

// ---------------------------------------------------------------------------
// Modified Bessel K_{1/4} and K_{3/4} as a pair.
//
// z <= 2 : both Frobenius branches summed directly,
//            K_nu = 1/2 Gamma(nu)(z/2)^{-nu} F(1-nu) + 1/2 Gamma(-nu)(z/2)^{nu} F(1+nu),
//            F(c; w) = sum w^k / (k! (c)_k),  w = z^2/4.
//          At nu = 1/4, 3/4 the two branches never get close to cancelling
//          (they do for nu -> 0, which is why the generic small-z algorithm is
//          more involved -- not needed at quarter orders).
// z > 2  : Temme/Thompson-Barnett continued fraction CF2 at nu = -1/4, which
//          returns K_{-1/4} = K_{1/4} together with the ratio giving K_{3/4}.
// ---------------------------------------------------------------------------
template <class R>
struct bessel_k_pair {
    R k14;  // K_{1/4}(z)
    R k34;  // K_{3/4}(z)
};

namespace detail {

template <class R>
R hyper0f1(R c, R w) {
    const R eps = eps_of<R>();
    R sum = R(1), term = R(1);
    for (int k = 1; k < 1000; ++k) {
        term *= w / (R(k) * (c + R(k - 1)));
        sum += term;
        if (abs(term) < eps * abs(sum)) break;
    }
    return sum;
}

template <class R>
R bessel_k_series(R nu, R z) {
    const R half = real_const<R>("0.5");
    const R w = z * z / R(4);
    const R zh = z / R(2);
    return half * gamma_fn(nu) * pow(zh, -nu) * hyper0f1(R(1) - nu, w) +
           half * gamma_fn(-nu) * pow(zh, nu) * hyper0f1(R(1) + nu, w);
}

template <class R>
bessel_k_pair<R> bessel_k_cf2(R z) {
    // continued fraction CF2 at nu = -1/4 (Thompson & Barnett); valid z > ~1
    const R eps = eps_of<R>();
    const R nu = real_const<R>("-0.25");
    const R a1 = real_const<R>("0.25") - nu * nu;  // 1/4 - nu^2
    R b = R(2) * (R(1) + z);
    R d = R(1) / b;
    R h = d, delh = d;
    R q1 = R(0), q2 = R(1);
    R q = a1, c = a1;
    R a = -a1;
    R s = R(1) + q * delh;
    for (int i = 2; i < 20000; ++i) {
        a -= R(2 * (i - 1));
        c = -a * c / R(i);
        const R qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += R(2);
        d = R(1) / (a * d + b);
        delh = (b * d - R(1)) * delh;
        h += delh;
        const R dels = q * delh;
        s += dels;
        if (abs(dels / s) < eps) {
            h = a1 * h;
            const R knu = sqrt(pi_v<R> / (R(2) * z)) * exp(-z) / s;
            const R knu1 = knu * (nu + z + real_const<R>("0.5") - h) / z;
            return {knu, knu1};  // K_{1/4} (=K_{-1/4}), K_{3/4}
        }
    }
    throw std::runtime_error("bessel_k_quarters: CF2 failed to converge");
}

}  // namespace detail

template <class R>
bessel_k_pair<R> bessel_k_quarters(R z) {
    using namespace detail;
    if (!(z > R(0))) throw std::domain_error("bessel_k_quarters: need z > 0");
    // The two Frobenius solutions cancel ~exp(2z) in the series sum, so keep
    // that branch to z <= 1 in hardware precision; the Temme/Thompson-Barnett
    // continued fraction is accurate from below 1 upward.
    const R series_reach = (working_digits<R>() >= 30) ? R(2) : R(1);
    if (z <= series_reach) {
        const R q = real_const<R>("0.25");
        return {bessel_k_series(q, z), bessel_k_series(R(3) * q, z)};
    }
    return bessel_k_cf2(z);
}

// Upward recurrence K_{nu+1} = K_{nu-1} + (2 nu / z) K_nu (stable upward).
template <class R>
R bessel_k54(R z) {
    const auto p = bessel_k_quarters(z);
    return p.k34 + p.k14 / (R(2) * z);
}

template <class R>
R bessel_k74(R z) {
    const auto p = bessel_k_quarters(z);
    return p.k14 + R(3) * p.k34 / (R(2) * z);
}

}  // namespace cmera
