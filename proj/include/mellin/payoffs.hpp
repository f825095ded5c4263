#pragma once

#include "mellin/levy_model.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/types.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mellin {

enum class ExerciseStyle { european, american };

/// basket_call is produced from the put through put-call parity.
enum class PayoffKind { basket_put, basket_call };

const char* to_string(ExerciseStyle style) noexcept;
const char* to_string(PayoffKind kind) noexcept;

struct OptionSpec {
    double strike = 100.0;
    double maturity = 1.0;
    ExerciseStyle style = ExerciseStyle::european;
    PayoffKind kind = PayoffKind::basket_put;
    std::vector<double> spot;
    double rate = 0.0;

    std::size_t dimension() const noexcept { return spot.size(); }
};

/// Strike, spots and rate must be finite; strike and spots positive; maturity
/// non-negative (zero maturity is priced as the payoff).
void validate_option(const OptionSpec& spec);

/// (K - sum S_j)^+
double basket_put_payoff(std::span<const double> spot, double strike);
double basket_call_payoff(std::span<const double> spot, double strike);

/// log of beta_n(w) K^(1 + sum w) / ((sum w)(1 + sum w)). Requires Re w_j > 0.
cplx log_basket_put_transform(std::span<const cplx> w, double strike);
cplx basket_put_transform(std::span<const cplx> w, double strike);

/// Mellin transform of f(S) = -r K 1{sum S_j <= s_star}:
/// -r K beta_n(w) s_star^(sum w) / sum w. Exactly zero when r = 0.
cplx exercise_source_transform(std::span<const cplx> w, double strike, double rate, double s_star);

/// The basket put transform packaged with its fundamental strip Re w_j > 0.
MellinFunction basket_put_mellin(std::size_t n, double strike);

/// Separable form of the basket put transform: log Gamma(w_j) per factor and
/// the strike and normalisation terms as a function of sum_j w_j.
SumFactorization basket_put_factorization(double strike);

/// European basket call from the put: C = P + sum S_j - K exp(-r T).
/// Requires a martingale-calibrated model; rejects American style.
double call_from_parity(double put_price, const OptionSpec& spec, const CharacteristicModel& model);

/// A payoff usable by the Mellin pricer: direct evaluator, log-space Mellin
/// evaluator and fundamental strip (per dimension). `factorization`, if set,
/// returns the separable form of the log transform for a given strike.
struct PayoffDefinition {
    std::string name;
    std::function<double(std::span<const double>, double)> direct;
    std::function<cplx(std::span<const cplx>, double)> log_transform;
    std::function<Strip(std::size_t)> strip;
    std::function<SumFactorization(double)> factorization = {};
};

class PayoffRegistry {
public:
    /// Registry pre-populated with the basket put.
    static PayoffRegistry& instance();

    void add(PayoffDefinition def);
    const PayoffDefinition& get(const std::string& name) const;
    bool contains(const std::string& name) const;

private:
    PayoffRegistry();
    std::map<std::string, PayoffDefinition> entries_;
};

}  // namespace mellin
