#pragma once

#include <complex>
#include <limits>

namespace mellin {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Open interval (lo, hi) of admissible real parts of a Mellin variable.
struct Strip {
    double lo = -kInf;
    double hi = kInf;

    bool contains(double a) const noexcept { return a > lo && a < hi; }
};

inline Strip intersect(Strip a, Strip b) noexcept {
    return {a.lo > b.lo ? a.lo : b.lo, a.hi < b.hi ? a.hi : b.hi};
}

}  // namespace mellin
