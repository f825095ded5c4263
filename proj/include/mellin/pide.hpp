#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/payoffs.hpp"

#include <cstddef>
#include <array>
#include <functional>
#include <span>
#include <vector>

namespace mellin {

/// Prices sampled on a rectilinear spot grid (n <= 2) at three calendar
/// times t - dt, t, t + dt. values[layer] is row-major over the spot axes
/// (the last axis varies fastest).
struct PriceGrid {
    std::vector<std::vector<double>> axes;
    double t = 0.0;
    double dt = 0.0;
    std::array<std::vector<double>, 3> values;

    std::size_t dimension() const noexcept { return axes.size(); }
    std::size_t size() const noexcept;
    double at(int layer, std::span<const std::size_t> index) const;
};

/// Samples v(S, t) onto a grid.
PriceGrid sample_grid(std::vector<std::vector<double>> axes,
                      double t,
                      double dt,
                      const std::function<double(std::span<const double>, double)>& v);

/// Uniform axis lo, lo + h, ..., hi (hi rounded to the grid).
std::vector<double> uniform_axis(double lo, double hi, double h);

struct ResidualField {
    std::vector<std::vector<double>> points;  ///< interior spot vectors
    std::vector<double> residual;

    double max_abs() const;
};

/// Pointwise left side of the backward Kolmogorov equation
///   V_t + sum b_i S_i V_i + 1/2 sum Sigma_ij S_i S_j V_ij - r V
///       + sum_i lambda_i E[V(.., S_i e^J, ..) - V - (e^J - 1) S_i V_i]
/// at the interior nodes of the middle time layer, by central differences
/// (five-point fourth order where the axis is locally uniform, three-point
/// next to the edges and on non-uniform stretches).
/// b_i = r for a martingale-calibrated model. The jump expectation uses
/// Gauss-Hermite (Merton) or Gauss-Laguerre (Kou) nodes with V(S e^y)
/// interpolated linearly along the jumping axis.
ResidualField pide_residual(const OptionSpec& spec, const LevyModel& model, const PriceGrid& grid);

/// Gauss-Hermite nodes/weights for E[g(Z)], Z ~ N(0, 1).
void gauss_hermite_probabilists(int order, std::vector<double>& nodes, std::vector<double>& weights);
/// Gauss-Laguerre nodes/weights for int_0^inf g(x) e^{-x} dx.
void gauss_laguerre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mellin
