#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/payoffs.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mellin {

double black_scholes_put(double spot, double strike, double rate, double sigma, double maturity);
double black_scholes_call(double spot, double strike, double rate, double sigma, double maturity);

/// Merton jump-diffusion put as a Poisson mixture of Black-Scholes prices.
double merton_put_series(double spot, double strike, double rate, double sigma, double maturity,
                         const MertonJumps& jumps, int terms = 80);

struct LatticeResult {
    double price = 0.0;
    /// Lattice exercise boundary: for each time to maturity, the largest
    /// node price at which exercising is optimal (NaN where none is, or where
    /// even the top node is exercised so the tree does not reach the boundary).
    std::vector<double> tau;
    std::vector<double> boundary;
};

/// Cox-Ross-Rubinstein tree with an exercise check at every node.
LatticeResult binomial_american_put(double spot, double strike, double rate, double sigma, double maturity,
                                    int steps);
double binomial_european_put(double spot, double strike, double rate, double sigma, double maturity, int steps);

/// Lattice boundary interpolated onto the given times to maturity, skipping
/// unresolved (NaN) entries and holding the nearest value flat at the ends.
std::vector<double> lattice_boundary_at(const LatticeResult& lattice, std::span<const double> tau);

struct McConfig {
    std::int64_t paths = 100000;
    int steps = 1;
    std::uint64_t seed = 42;
    bool antithetic = true;
    int threads = 1;
};

struct McEstimate {
    double price = 0.0;
    double std_error = 0.0;
    std::int64_t paths = 0;
    std::vector<std::string> notes;
};

/// e^{-rT} E[g(S_T)] with S_T = S_0 exp(r T + L_T). Paths are generated in
/// fixed batches, batch b seeded from (seed, b) and reduced in batch order,
/// so the estimate does not depend on the thread count.
McEstimate mc_discounted_payoff(const OptionSpec& spec,
                                const LevyModel& model,
                                const McConfig& mc,
                                const std::function<double(std::span<const double>)>& payoff);

/// European basket put or call (spec.kind).
McEstimate mc_european(const OptionSpec& spec, const LevyModel& model, const McConfig& mc);

/// E[exp(L_T^k)] for asset k (should be 1 for a martingale-calibrated model).
McEstimate mc_exponential_moment(const LevyModel& model, std::size_t k, double maturity, const McConfig& mc);

/// Longstaff-Schwartz Bermudan basket put with `exercise_dates` equally
/// spaced dates. Regression on in-the-money paths with basis
/// {1, x, x^2, payoff} in x = sum S / K; columns that are linearly dependent
/// on the others are dropped with a note. The exercise policy is fitted on
/// one path set and evaluated on an independent one, so the estimate is
/// biased low.
McEstimate mc_american_lsq(const OptionSpec& spec, const LevyModel& model, const McConfig& mc, int exercise_dates);

}  // namespace mellin
