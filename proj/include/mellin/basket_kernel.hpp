#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mellin {

/// Structured evaluation of the basket-put pricing integrands on the lattice
/// w_j = a_j + i h (k_j + 1/2), k_j in [-M_j, M_j), the last dimension folded
/// to k_n >= 0 (conjugate symmetry).
///
/// Every grid value factors as exp(sum_j sep_j(k_j) + cross(k) + g(sum w)),
/// so quantities that depend on the spot only through sum w (the diagonal
/// spot (s/n, ..., s/n) and the critical price power s_star^(sum w)) reduce
/// to sums over the hyperplanes sum k_j = const. The early-exercise solver
/// relies on this: each time slice costs one lattice pass, after which every
/// value-matching evaluation is a one-dimensional sum.
class BasketKernel {
public:
    struct Slice {
        double u = 0.0;                ///< time to run, tau - s
        std::vector<int> half_nodes;   ///< M_j
        int k_min = 0;                 ///< smallest hyperplane index kept
        std::vector<cplx> premium;     ///< sum of K beta(w) Phi e^{-ru} / (sum w) per hyperplane
        std::vector<cplx> european;    ///< same for the put transform
        std::size_t lattice_points = 0;
    };

    /// weight * r K * P(basket at time u <= boundary) contribution.
    struct BoundaryTerm {
        double weight = 0.0;
        double boundary = 0.0;
    };

    BasketKernel(const CharacteristicModel& model,
                 double strike,
                 double rate,
                 std::vector<double> abscissa,
                 double step,
                 double truncation_tol,
                 int threads);

    std::size_t dimension() const noexcept { return abscissa_.size(); }
    double step() const noexcept { return step_; }
    const std::vector<double>& abscissa() const noexcept { return abscissa_; }

    /// Half node counts M_j sized from the decay of the premium kernel at u.
    std::vector<int> half_nodes(double u) const;

    Slice slice(double u) const;

    /// European put value at the diagonal spot with sum S = aggregate, u = slice.u.
    double european_at_diagonal(const Slice& slice, double aggregate) const;

    /// r K e^{-ru} P(sum_j S_j exp(X_j(u)) <= boundary) at the diagonal spot.
    double premium_at_diagonal(const Slice& slice, double boundary, double aggregate) const;

    /// Full-lattice contraction at arbitrary spots:
    ///   european_weight * EuropeanPut(u) + sum_t weight_t r K e^{-ru} P(... <= boundary_t).
    std::vector<double> contract(double u,
                                 std::span<const BoundaryTerm> terms,
                                 double european_weight,
                                 const std::vector<std::vector<double>>& spots) const;

    std::size_t last_lattice_points() const noexcept { return last_points_; }

private:
    struct Axis {
        std::vector<cplx> w;
        std::vector<cplx> sep;
        int first = 0;  ///< k of element 0
    };

    std::vector<Axis> axes(double u, const std::vector<int>& half) const;
    cplx log_premium_factor(cplx z, double u) const;
    cplx log_european_ratio(cplx z) const;
    cplx sum_w(int k_total) const;

    template <class Visit>
    void for_each_point(const std::vector<Axis>& ax, double u, Visit&& visit) const;

    const CharacteristicModel* model_;
    double strike_;
    double rate_;
    std::vector<double> abscissa_;
    double step_;
    double tol_;
    int threads_;
    double forward_;
    Eigen::MatrixXd cov_;
    mutable std::size_t last_points_ = 0;
};

}  // namespace mellin
