#pragma once
// Shared helpers for the unit tests: relative error against a decimal string
// reference (parsed in the working precision, so 50-digit references serve
// both double and extended assertions).

#include <cmath>
#include <cstdlib>

#include "cmera/precision.hpp"

template <class R>
double rel_err(R got, const char* want) {
    const R w = cmera::real_const<R>(want);
    using std::abs;
    if (w == R(0)) return static_cast<double>(abs(got));
    const R r = abs((got - w) / w);
    return static_cast<double>(r);
}

inline double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs((got - want) / want);
}
