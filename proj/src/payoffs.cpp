#include "mellin/payoffs.hpp"

#include "mellin/error.hpp"
#include "mellin/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mellin {

namespace {

void require_strip(std::span<const cplx> w, const char* who) {
    if (w.empty()) {
        fail(ErrorCode::InvalidArgument, std::string(who) + ": empty argument");
    }
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (!(w[j].real() > 0.0)) {
            fail(ErrorCode::StripViolation, std::string(who) + ": Re w_" + std::to_string(j) +
                                                " must be > 0 (fundamental strip of the basket put)");
        }
    }
}

cplx sum_of(std::span<const cplx> w) {
    return std::accumulate(w.begin(), w.end(), cplx{0.0});
}

}  // namespace

const char* to_string(ExerciseStyle style) noexcept {
    return style == ExerciseStyle::american ? "american" : "european";
}

const char* to_string(PayoffKind kind) noexcept {
    return kind == PayoffKind::basket_call ? "basket_call" : "basket_put";
}

void validate_option(const OptionSpec& spec) {
    if (!(spec.strike > 0.0) || !std::isfinite(spec.strike)) {
        fail(ErrorCode::InvalidArgument, "strike must be finite and > 0");
    }
    if (!(spec.maturity >= 0.0) || !std::isfinite(spec.maturity)) {
        fail(ErrorCode::InvalidArgument, "maturity must be finite and >= 0");
    }
    if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate)) {
        fail(ErrorCode::InvalidArgument, "rate must be finite and >= 0");
    }
    if (spec.spot.empty()) {
        fail(ErrorCode::InvalidArgument, "at least one spot is required");
    }
    for (std::size_t j = 0; j < spec.spot.size(); ++j) {
        if (!(spec.spot[j] > 0.0) || !std::isfinite(spec.spot[j])) {
            fail(ErrorCode::InvalidArgument, "spot " + std::to_string(j) + " must be finite and > 0");
        }
    }
}

double basket_put_payoff(std::span<const double> spot, double strike) {
    const double total = std::accumulate(spot.begin(), spot.end(), 0.0);
    return std::max(strike - total, 0.0);
}

double basket_call_payoff(std::span<const double> spot, double strike) {
    const double total = std::accumulate(spot.begin(), spot.end(), 0.0);
    return std::max(total - strike, 0.0);
}

cplx log_basket_put_transform(std::span<const cplx> w, double strike) {
    require_strip(w, "basket_put_transform");
    const cplx s = sum_of(w);
    // Re(s) > 0 keeps both logs away from the branch cut.
    return log_multinomial_beta(w) + (1.0 + s) * std::log(strike) - std::log(s) - std::log(1.0 + s);
}

cplx basket_put_transform(std::span<const cplx> w, double strike) {
    return std::exp(log_basket_put_transform(w, strike));
}

cplx exercise_source_transform(std::span<const cplx> w, double strike, double rate, double s_star) {
    require_strip(w, "exercise_source_transform");
    if (!(s_star > 0.0)) {
        fail(ErrorCode::InvalidArgument, "exercise_source_transform: critical price must be > 0");
    }
    if (rate == 0.0) return 0.0;
    const cplx s = sum_of(w);
    return -rate * strike * std::exp(log_multinomial_beta(w) + s * std::log(s_star) - std::log(s));
}

MellinFunction basket_put_mellin(std::size_t n, double strike) {
    MellinFunction f;
    f.evaluator = [strike](std::span<const cplx> w) { return basket_put_transform(w, strike); };
    f.strip.assign(n, Strip{0.0, kInf});
    f.factorization = basket_put_factorization(strike);
    return f;
}

SumFactorization basket_put_factorization(double strike) {
    const double log_k = std::log(strike);
    return SumFactorization{
        [](std::size_t, cplx w) {
            if (!(w.real() > 0.0)) fail(ErrorCode::StripViolation, "basket_put_transform: Re w must be > 0");
            return log_gamma(w);
        },
        [log_k](cplx z) { return (1.0 + z) * log_k - log_gamma(z) - std::log(z) - std::log(1.0 + z); },
        0.5 * std::numbers::pi,
        {},
    };
}

double call_from_parity(double put_price, const OptionSpec& spec, const CharacteristicModel& model) {
    if (spec.style == ExerciseStyle::american) {
        fail(ErrorCode::UnsupportedStyle,
             "put-call parity is an inequality for American options; only European calls are supported");
    }
    if (model.drift_convention() != DriftConvention::martingale) {
        fail(ErrorCode::InvalidArgument, "put-call parity needs a martingale-calibrated model");
    }
    const double total = std::accumulate(spec.spot.begin(), spec.spot.end(), 0.0);
    return put_price + total - spec.strike * std::exp(-spec.rate * spec.maturity);
}

PayoffRegistry::PayoffRegistry() {
    add(PayoffDefinition{
        "basket_put",
        [](std::span<const double> s, double k) { return basket_put_payoff(s, k); },
        [](std::span<const cplx> w, double k) { return log_basket_put_transform(w, k); },
        [](std::size_t) { return Strip{0.0, kInf}; },
        [](double k) { return basket_put_factorization(k); },
    });
}

PayoffRegistry& PayoffRegistry::instance() {
    static PayoffRegistry registry;
    return registry;
}

void PayoffRegistry::add(PayoffDefinition def) {
    if (def.name.empty() || !def.direct || !def.log_transform || !def.strip) {
        fail(ErrorCode::InvalidArgument, "payoff definition is incomplete");
    }
    entries_[def.name] = std::move(def);
}

const PayoffDefinition& PayoffRegistry::get(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
        fail(ErrorCode::InvalidArgument, "unknown payoff '" + name + "'");
    }
    return it->second;
}

bool PayoffRegistry::contains(const std::string& name) const {
    return entries_.count(name) != 0;
}

}  // namespace mellin
