#pragma once

#include "mellin/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mellin {

inline constexpr std::size_t kMaxDimension = 3;

/// Vertical contours Re(w_j) = abscissa[j], truncated to |Im w_j| <= half_width[j]
/// and sampled at nodes[j] midpoint-offset trapezoid points (spacing
/// 2 * half_width / nodes, no node on the real axis).
///
/// Empty `half_width` means "choose by decay" (choose_truncation with
/// `truncation_tol`); empty `nodes` means "derive from `step`".
struct ContourSpec {
    std::vector<double> abscissa;
    std::vector<double> half_width;
    std::vector<int> nodes;
    double step = 0.4;
    double truncation_tol = 1e-12;
    /// Integrate only Im w_n > 0 and double the real part. Valid when the
    /// transform satisfies f(conj w) = conj f(w), i.e. inverts to a real function.
    bool exploit_symmetry = true;
    int threads = 1;
};

/// Optional structure log f(w) = sum_j log_factor(j, w_j) + log_coupling(sum_j w_j).
/// With equal node spacing in every dimension the lattice sum then reduces to
/// discrete convolutions along the hyperplanes sum_j k_j = const. `tilt` is a
/// rate c such that exp(log_factor(j, w) + c |Im w|) stays bounded; the
/// contraction applies e^{+-c Im w} per factor to avoid overflow.
/// `log_cross`, when set, adds a non-separable term to log f; the convolution
/// is then unavailable, but the lattice sum still tabulates the separable
/// parts once per node and evaluates only log_cross per lattice point.
struct SumFactorization {
    std::function<cplx(std::size_t, cplx)> log_factor;
    std::function<cplx(cplx)> log_coupling;
    double tilt = 0.0;
    std::function<cplx(std::span<const cplx>)> log_cross;
};

/// A transform known in closed form, with its fundamental strip per dimension.
struct MellinFunction {
    std::function<cplx(std::span<const cplx>)> evaluator;
    std::vector<Strip> strip;
    std::optional<SumFactorization> factorization;

    std::size_t dimension() const noexcept { return strip.size(); }
    cplx operator()(std::span<const cplx> w) const { return evaluator(w); }
};

struct InversionDiagnostics {
    std::vector<int> nodes;
    std::vector<double> half_width;
    /// |Im| of the unfolded sum; 0 when exploit_symmetry folds it away.
    double imaginary_residue = 0.0;
    bool accuracy_warning = false;
};

struct InversionResult {
    double value = 0.0;
    InversionDiagnostics diagnostics;
};

void validate_contour(const ContourSpec& contour, std::span<const Strip> strip);

/// Smallest half-width per dimension on the ladder 8, 16, ..., 2^14 at which
/// |f| has fallen below tol * |f(abscissa)|, probing one coordinate at a time.
std::vector<double> choose_truncation(const MellinFunction& f,
                                      std::span<const double> abscissa,
                                      double tol);

/// Fills in automatic half-widths and node counts, then validates.
ContourSpec resolve_contour(const MellinFunction& f, ContourSpec contour);

/// (2 pi i)^-n int_gamma f(w) x^-w dw by tensor-product trapezoid quadrature.
InversionResult inverse_mellin(const MellinFunction& f,
                               const ContourSpec& contour,
                               std::span<const double> x);

/// Batch form: the transform is evaluated once per node and contracted with
/// every point in `points`.
std::vector<InversionResult> inverse_mellin(const MellinFunction& f,
                                            const ContourSpec& contour,
                                            const std::vector<std::vector<double>>& points);

}  // namespace mellin
