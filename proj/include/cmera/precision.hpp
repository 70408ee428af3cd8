#pragma once
// Scalar-type plumbing: the numerical core is templated on a real type so the
// same code runs in hardware doubles and in 50-digit software floats.  The
// extended type is only engaged where round-off in double would eat into the
// quantity being computed (deep kernel tails); everything else instantiates
// with double.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace cmera {

using extended = boost::multiprecision::cpp_bin_float_50;

// Raised when an iterative numerical scheme fails to reach its tolerance
// (as opposed to a caller passing bad arguments, which is a domain_error).
struct numerics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse a decimal literal into R without going through double when R carries
// more precision than double does.
template <class R>
inline R real_const(const char* s) {
    if constexpr (std::is_floating_point_v<R>) {
        return static_cast<R>(std::strtod(s, nullptr));
    } else {
        return R(s);
    }
}

template <class R>
inline int working_digits() {
    return std::numeric_limits<R>::digits10;
}

// Euler-Mascheroni constant and sigma = exp(gamma); sigma is the natural
// width parameter of the Gaussian entangler profile.
template <class R>
inline const R euler_gamma_v =
    real_const<R>("0.577215664901532860606512090082402431042159335939924");
template <class R>
inline const R sigma_v =
    real_const<R>("1.781072417990197985236504103107179549169645214303");
template <class R>
inline const R pi_v =
    real_const<R>("3.141592653589793238462643383279502884197169399375106");

}  // namespace cmera
