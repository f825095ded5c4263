#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/payoffs.hpp"

#include <string>
#include <vector>

namespace mellin {

struct PricingDiagnostics {
    std::vector<int> nodes;
    std::vector<double> half_width;
    std::vector<double> abscissa;
    double imaginary_residue = 0.0;
    bool accuracy_warning = false;
    int time_steps = 0;
    int boundary_iterations = 0;
    std::size_t lattice_points = 0;
    std::vector<double> boundary_times;
    std::vector<double> boundary_values;
    std::string note;
};

/// price = european_part + premium_part.
struct PricingResult {
    double price = 0.0;
    double european_part = 0.0;
    double premium_part = 0.0;
    PricingDiagnostics diagnostics;
};

/// Critical aggregate price S*(tau) on a grid of times to maturity.
struct BoundaryCurve {
    std::vector<double> times;
    std::vector<double> s_star;
    int iterations = 0;
};

inline constexpr int kDefaultTimeSteps = 64;

/// Default contour abscissa per asset: 2 when admissible, otherwise the
/// middle of the strip shared by the payoff and the model.
std::vector<double> default_abscissa(const CharacteristicModel& model);

/// w -> theta_hat(w) Phi(w i, tau) e^{-r tau}, assembled in log space. Under
/// the martingale convention Phi is the characteristic function of the full
/// log-return r tau + L_tau, which contributes exp(-r tau sum w).
MellinFunction european_integrand(const OptionSpec& spec,
                                  const CharacteristicModel& model,
                                  double tau);

PricingResult price_european(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour);

/// European prices at several spot vectors sharing one quadrature grid.
std::vector<PricingResult> price_european(const OptionSpec& spec,
                                          const CharacteristicModel& model,
                                          const ContourSpec& contour,
                                          const std::vector<std::vector<double>>& spots);

BoundaryCurve solve_boundary(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour,
                             int time_steps = kDefaultTimeSteps);

PricingResult price_american(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour,
                             int time_steps = kDefaultTimeSteps);

std::vector<PricingResult> price_american(const OptionSpec& spec,
                                          const CharacteristicModel& model,
                                          const ContourSpec& contour,
                                          int time_steps,
                                          const std::vector<std::vector<double>>& spots);

/// Dispatches on spec.style.
PricingResult price(const OptionSpec& spec,
                    const CharacteristicModel& model,
                    const ContourSpec& contour,
                    int time_steps = kDefaultTimeSteps);

}  // namespace mellin
