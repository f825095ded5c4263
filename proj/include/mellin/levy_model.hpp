#pragma once

#include "mellin/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mellin {

/// Which drift the risk-neutral calibration produces.
///  - martingale: E[exp(L_t)] = 1, so S_t = S_0 exp(r t + L_t) grows at r.
///  - paper_literal: additionally subtracts r from every drift component and
///    prices with exp(-Psi(w i) - r) as the Mellin symbol, without the
///    forward factor. Kept for reproducing the published formula verbatim;
///    its prices do not agree with the Monte Carlo oracle.
enum class DriftConvention { martingale, paper_literal };

struct NoJumps {};

/// Compound Poisson jumps with normally distributed log-jump sizes.
struct MertonJumps {
    double intensity = 0.0;  ///< lambda >= 0
    double mean = 0.0;       ///< m
    double stddev = 0.0;     ///< delta > 0
};

/// Compound Poisson jumps with double-exponential log-jump sizes.
struct KouJumps {
    double intensity = 0.0;  ///< lambda >= 0
    double up_prob = 0.5;    ///< p in [0, 1]
    double up_rate = 10.0;   ///< eta1 > 1
    double down_rate = 10.0; ///< eta2 > 0
};

using JumpSpec = std::variant<NoJumps, MertonJumps, KouJumps>;

void validate_jumps(const JumpSpec& jumps);

/// lambda * (1 - E[exp(i u J)] + i u E[J; |J| < 1]): the jump part of the
/// Levy-Khintchine exponent, analytically continued to complex u.
cplx jump_exponent(const JumpSpec& jumps, cplx u);

/// int (e^y - 1 - y 1{|y|<1}) nu(dy), finite for every valid JumpSpec.
double jump_compensator(const JumpSpec& jumps);

/// Admissible Re(w) for E[exp(-w J)] < infinity.
Strip jump_moment_strip(const JumpSpec& jumps);

/// Checks symmetry, unit diagonal, entries in [-1, 1] and positive
/// semidefiniteness. The PSD failure message names the smallest eigenvalue.
void validate_correlation(const Eigen::MatrixXd& corr);

struct LevyTriplet {
    std::vector<double> drift;   ///< per-unit-time drift of L
    std::vector<double> vols;    ///< sigma_i > 0
    Eigen::MatrixXd corr;        ///< rho
    std::vector<JumpSpec> jumps; ///< one per asset, independent across assets

    std::size_t dimension() const noexcept { return vols.size(); }
    Eigen::MatrixXd covariance() const;
};

void validate_triplet(const LevyTriplet& triplet);

/// Drift making each discounted asset a martingale:
/// mu_i = -sigma_i^2 / 2 - int (e^y - 1 - y 1{|y|<1}) nu_i(dy),
/// minus r under DriftConvention::paper_literal.
std::vector<double> calibrate_drift(std::span<const double> vols,
                                    const Eigen::MatrixXd& corr,
                                    std::span<const JumpSpec> jumps,
                                    double rate,
                                    DriftConvention convention = DriftConvention::martingale);

/// Anything exposing a characteristic exponent Psi(u) with
/// E[exp(i u'L_t)] = exp(-t Psi(u)) at complex u.
class CharacteristicModel {
public:
    virtual ~CharacteristicModel() = default;

    virtual std::size_t dimension() const = 0;
    virtual cplx exponent(std::span<const cplx> u) const = 0;

    /// Strip of Re(w_k) on which Psi(i w) is analytic (finite exponential
    /// moments of -L_k).
    virtual Strip mellin_strip(std::size_t k) const = 0;

    virtual DriftConvention drift_convention() const { return DriftConvention::martingale; }

    /// True when Psi(u) = u' C u / 2 + sum_k psi_k(u_k); enables the
    /// tensor-structured fast path in the pricer.
    virtual bool separable() const { return false; }
    virtual Eigen::MatrixXd gaussian_covariance() const { return {}; }
    virtual cplx marginal_exponent(std::size_t /*k*/, cplx /*u_k*/) const { return 0.0; }

    virtual std::string name() const = 0;
};

/// Finite-activity multivariate Levy model: correlated Brownian part plus
/// independent per-asset compound Poisson jumps.
class LevyModel final : public CharacteristicModel {
public:
    explicit LevyModel(LevyTriplet triplet,
                       DriftConvention convention = DriftConvention::martingale);

    static LevyModel risk_neutral(std::vector<double> vols,
                                  Eigen::MatrixXd corr,
                                  std::vector<JumpSpec> jumps,
                                  double rate,
                                  DriftConvention convention = DriftConvention::martingale);

    std::size_t dimension() const override { return triplet_.dimension(); }
    cplx exponent(std::span<const cplx> u) const override;
    Strip mellin_strip(std::size_t k) const override;
    DriftConvention drift_convention() const override { return convention_; }

    bool separable() const override { return true; }
    Eigen::MatrixXd gaussian_covariance() const override { return covariance_; }
    cplx marginal_exponent(std::size_t k, cplx u_k) const override;

    std::string name() const override;

    const LevyTriplet& triplet() const noexcept { return triplet_; }
    const Eigen::MatrixXd& covariance() const noexcept { return covariance_; }
    const Eigen::MatrixXd& cholesky_factor() const noexcept { return cholesky_; }

private:
    LevyTriplet triplet_;
    DriftConvention convention_;
    Eigen::MatrixXd covariance_;
    Eigen::MatrixXd cholesky_;
};

cplx char_exponent(const CharacteristicModel& model, std::span<const cplx> u);

/// exp(-t Psi(u)); exactly 1 at t = 0. Throws ErrorCode::Overflow when the
/// result is not representable.
cplx char_function(const CharacteristicModel& model, std::span<const cplx> u, double t);

using RngStream = std::mt19937_64;

/// Exact-in-distribution increment sampler over a fixed step dt.
class IncrementSampler {
public:
    IncrementSampler(const LevyModel& model, double dt);

    /// Writes one increment L_{t+dt} - L_t into `out` (length n).
    void sample(RngStream& rng, std::span<double> out);

    /// Same increment driven by the negated Gaussian draws of the previous
    /// call (jump part redrawn), for antithetic pairing.
    void sample_antithetic(RngStream& rng, std::span<double> out);

    double dt() const noexcept { return dt_; }

private:
    void add_jumps(RngStream& rng, std::span<double> out);

    const LevyModel* model_;
    double dt_;
    std::vector<double> drift_;
    Eigen::MatrixXd scaled_cholesky_;
    Eigen::VectorXd normals_;
    Eigen::VectorXd gauss_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Increments over [0, t] on steps of dt (the last step shortened to land on
/// t): (drift - lambda E[J; |J| < 1]) * dt + Cholesky(Sigma dt) Z + Poisson
/// jump sums.
std::vector<Eigen::VectorXd> levy_ito_sample(const LevyModel& model, double t, double dt,
                                             RngStream& rng);

}  // namespace mellin
