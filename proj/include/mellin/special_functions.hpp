#pragma once

#include "mellin/types.hpp"

#include <span>

namespace mellin {

/// Principal branch of log Gamma(z): the analytic continuation from the
/// positive real axis with the branch cut on the negative real axis.
/// Accurate to at least 12 significant digits for Re z in [-10, 200],
/// |Im z| <= 500. Throws ErrorCode::Domain at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

/// log of the multinomial beta function prod Gamma(w_j) / Gamma(sum w_j).
cplx log_multinomial_beta(std::span<const cplx> w);

/// prod Gamma(w_j) / Gamma(sum w_j), assembled in log space.
cplx multinomial_beta(std::span<const cplx> w);

/// Standard normal cumulative distribution function.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

}  // namespace mellin
