#include "mellin/special_functions.hpp"

#include "mellin/error.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace mellin {

namespace {

// B_{2k} / (2k (2k - 1)) for k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

constexpr double kStirlingRadius = 15.0;

cplx stirling(cplx z) {
    const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
    cplx inv = 1.0 / z;
    cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + half_log_two_pi + series;
}

}  // namespace

cplx log_gamma(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(ErrorCode::InvalidArgument, "log_gamma: non-finite argument");
    }
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        fail(ErrorCode::Domain,
             "log_gamma: pole at z = " + std::to_string(z.real()));
    }
    // Upward recurrence log Gamma(z) = log Gamma(z + m) - sum log(z + k); each
    // principal log keeps the cut on the negative real axis.
    cplx shift = 0.0;
    while (z.real() < 0.0 || std::abs(z) < kStirlingRadius) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

cplx log_multinomial_beta(std::span<const cplx> w) {
    if (w.empty()) {
        fail(ErrorCode::InvalidArgument, "multinomial_beta: empty argument");
    }
    cplx total = 0.0;
    cplx acc = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        try {
            acc += log_gamma(w[j]);
        } catch (const Error&) {
            fail(ErrorCode::Domain,
                 "multinomial_beta: Gamma pole at component " + std::to_string(j));
        }
        total += w[j];
    }
    try {
        return acc - log_gamma(total);
    } catch (const Error&) {
        fail(ErrorCode::Domain, "multinomial_beta: Gamma pole at the component sum");
    }
}

cplx multinomial_beta(std::span<const cplx> w) {
    return std::exp(log_multinomial_beta(w));
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace mellin
