#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace mellin {

/// Neumaier-compensated accumulator. Works for double and std::complex<double>
/// (the compensation runs independently on the real and imaginary parts).
template <class T>
class CompensatedSum {
public:
    void add(T x) noexcept {
        if constexpr (std::is_same_v<T, double>) {
            add_real(sum_, comp_, x);
        } else {
            double sr = sum_.real(), cr = comp_.real();
            double si = sum_.imag(), ci = comp_.imag();
            add_real(sr, cr, x.real());
            add_real(si, ci, x.imag());
            sum_ = T(sr, si);
            comp_ = T(cr, ci);
        }
    }

    CompensatedSum& operator+=(T x) noexcept {
        add(x);
        return *this;
    }

    T value() const noexcept { return sum_ + comp_; }

private:
    static void add_real(double& sum, double& comp, double x) noexcept {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    T sum_{};
    T comp_{};
};

}  // namespace mellin
