#include "mellin/pricing.hpp"

#include "mellin/basket_kernel.hpp"
#include "mellin/error.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace mellin {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_inputs(const OptionSpec& spec, const CharacteristicModel& model) {
    validate_option(spec);
    if (spec.dimension() > kMaxDimension) {
        fail(ErrorCode::UnsupportedDimension,
             "Mellin pricer supports at most 3 assets, got " + std::to_string(spec.dimension()));
    }
    if (model.dimension() != spec.dimension()) {
        fail(ErrorCode::InvalidArgument, "model and option disagree on the number of assets");
    }
}

ContourSpec with_abscissa(ContourSpec contour, const CharacteristicModel& model) {
    if (contour.abscissa.empty()) contour.abscissa = default_abscissa(model);
    return contour;
}

double payoff_of(const OptionSpec& spec, std::span<const double> spot) {
    return spec.kind == PayoffKind::basket_call ? basket_call_payoff(spot, spec.strike)
                                                : basket_put_payoff(spot, spec.strike);
}

PricingResult payoff_result(const OptionSpec& spec, std::span<const double> spot) {
    PricingResult r;
    r.price = payoff_of(spec, spot);
    r.european_part = r.price;
    r.diagnostics.note = "zero time to maturity: payoff returned";
    return r;
}

std::string fmt_shortfall(double shortfall, bool inside) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s: intrinsic value returned (integral form was %.3g below it)",
                  inside ? "exercise region" : "continuation region", shortfall);
    return buf;
}

// Trapezoid weights and nodes for the premium time integral at tau_k = k * dt.
// Uniform nodes cover [0, tau_{k-1}]; the last interval [tau_{k-1}, tau_k] is
// split geometrically toward u = tau - s = 0 where the integrand has a
// square-root kink.
constexpr std::array<double, 5> kSubBreaks = {1.0, 0.5, 0.25, 0.125, 0.0};  // u / dt

double sub_weight(std::size_t i) {
    const double left = i == 0 ? 0.0 : kSubBreaks[i - 1] - kSubBreaks[i];
    const double right = i + 1 == kSubBreaks.size() ? 0.0 : kSubBreaks[i] - kSubBreaks[i + 1];
    return 0.5 * (left + right);
}

double uniform_weight(int j, int k) {
    // nodes s_0..s_{k-1}
    if (k <= 1) return 0.0;
    return (j == 0 || j == k - 1) ? 0.5 : 1.0;
}

class EarlyExerciseSolver {
public:
    EarlyExerciseSolver(const OptionSpec& spec,
                        const CharacteristicModel& model,
                        const ContourSpec& contour,
                        int time_steps)
        : spec_(spec),
          kernel_(model, spec.strike, spec.rate, contour.abscissa, contour.step, contour.truncation_tol,
                  contour.threads),
          steps_(time_steps),
          tau_(spec.maturity),
          dt_(spec.maturity / time_steps) {
        uniform_.reserve(static_cast<std::size_t>(steps_));
        for (int m = 1; m <= steps_; ++m) {
            uniform_.push_back(kernel_.slice(m * dt_));
            lattice_points_ += uniform_.back().lattice_points;
        }
        for (std::size_t i = 1; i + 1 < kSubBreaks.size(); ++i) {
            sub_.push_back(kernel_.slice(kSubBreaks[i] * dt_));
            lattice_points_ += sub_.back().lattice_points;
        }
    }

    BoundaryCurve solve() {
        const double strike = spec_.strike;
        boundary_.assign(static_cast<std::size_t>(steps_) + 1, strike);
        BoundaryCurve curve;
        curve.times.resize(boundary_.size());
        for (int k = 0; k <= steps_; ++k) curve.times[k] = k * dt_;

        for (int k = 1; k <= steps_; ++k) {
            auto g = [&](double s) { return value_at(k, s) - (strike - s); };
            const double tol = 1e-8 * strike;

            double hi = boundary_[k - 1];
            double g_hi = g(hi);
            ++iterations_;
            if (g_hi < 0.0) {
                hi = strike;
                g_hi = g(hi);
                ++iterations_;
            }
            if (!(g_hi >= 0.0)) {
                throw NonConvergenceError("boundary solver: value-matching residual is negative at s = K",
                                          hi, g_hi);
            }
            double factor = 0.98;
            double lo = hi * factor;
            double g_lo = g(lo);
            ++iterations_;
            while (g_lo >= 0.0) {
                hi = lo;
                g_hi = g_lo;
                factor *= factor;
                lo = hi * factor;
                if (lo < 1e-8 * strike) {
                    throw NonConvergenceError("boundary solver: no sign change in (0, K]", lo, g_lo);
                }
                g_lo = g(lo);
                ++iterations_;
            }
            if (g_hi == 0.0) {
                boundary_[k] = hi;
                continue;
            }
            std::uintmax_t max_iter = 100;
            auto stop = [tol](double a, double b) { return std::abs(b - a) < tol; };
            auto root = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, stop, max_iter);
            iterations_ += static_cast<int>(max_iter);
            if (max_iter >= 100 && std::abs(root.second - root.first) >= tol) {
                throw NonConvergenceError("boundary solver: 100 iterations without convergence",
                                          0.5 * (root.first + root.second),
                                          g(0.5 * (root.first + root.second)));
            }
            boundary_[k] = 0.5 * (root.first + root.second);
        }
        curve.s_star = boundary_;
        curve.iterations = iterations_;
        return curve;
    }

    /// Early-exercise premium at tau = T for arbitrary spots; requires solve().
    std::vector<double> premium(const std::vector<std::vector<double>>& spots) const {
        const int k = steps_;
        std::vector<double> total(spots.size(), 0.0);
        auto accumulate = [&](double u, std::vector<BasketKernel::BoundaryTerm> terms) {
            for (auto& t : terms) t.weight *= dt_;
            const auto part = kernel_.contract(u, terms, 0.0, spots);
            for (std::size_t p = 0; p < spots.size(); ++p) total[p] += part[p];
        };
        for (int m = 1; m <= k; ++m) {
            const int j = k - m;
            std::vector<BasketKernel::BoundaryTerm> terms;
            terms.push_back({uniform_weight(j, k), boundary_[j]});
            if (m == 1) terms.push_back({sub_weight(0), boundary_[k - 1]});
            accumulate(m * dt_, std::move(terms));
        }
        for (std::size_t i = 1; i + 1 < kSubBreaks.size(); ++i) {
            accumulate(kSubBreaks[i] * dt_, {{sub_weight(i), interpolated(k, boundary_[k], kSubBreaks[i])}});
        }
        const double w0 = sub_weight(kSubBreaks.size() - 1) * dt_;
        for (std::size_t p = 0; p < spots.size(); ++p) {
            const double agg = std::accumulate(spots[p].begin(), spots[p].end(), 0.0);
            const double b = boundary_[k];
            const double indicator = agg < b ? 1.0 : (agg == b ? 0.5 : 0.0);
            total[p] += w0 * spec_.rate * spec_.strike * indicator;
        }
        return total;
    }

    int iterations() const noexcept { return iterations_; }
    std::size_t lattice_points() const noexcept { return lattice_points_; }
    const std::vector<double>& boundary() const noexcept { return boundary_; }

private:
    double interpolated(int k, double current, double u_over_dt) const {
        return current + (boundary_[k - 1] - current) * u_over_dt;
    }

    // American value at tau_k and the diagonal spot with aggregate s, taking
    // the critical price at tau_k to be s itself.
    double value_at(int k, double s) const {
        const auto& eur = uniform_[k - 1];
        double v = kernel_.european_at_diagonal(eur, s);
        for (int j = 0; j <= k - 1; ++j) {
            double w = uniform_weight(j, k);
            if (j == k - 1) w += sub_weight(0);
            if (w == 0.0) continue;
            v += dt_ * w * kernel_.premium_at_diagonal(uniform_[k - j - 1], boundary_[j], s);
        }
        for (std::size_t i = 1; i + 1 < kSubBreaks.size(); ++i) {
            const double b = interpolated(k, s, kSubBreaks[i]);
            v += dt_ * sub_weight(i) * kernel_.premium_at_diagonal(sub_[i - 1], b, s);
        }
        // u -> 0 with the spot on the boundary: P(basket <= boundary) -> 1/2.
        v += dt_ * sub_weight(kSubBreaks.size() - 1) * spec_.rate * spec_.strike * 0.5;
        return v;
    }

    OptionSpec spec_;
    BasketKernel kernel_;
    int steps_;
    double tau_;
    double dt_;
    std::vector<BasketKernel::Slice> uniform_;
    std::vector<BasketKernel::Slice> sub_;
    std::vector<double> boundary_;
    int iterations_ = 0;
    std::size_t lattice_points_ = 0;
};

void check_american(const OptionSpec& spec, int time_steps) {
    if (spec.kind != PayoffKind::basket_put) {
        fail(ErrorCode::UnsupportedStyle,
             "American pricing is implemented for the basket put only (an American call on "
             "non-dividend assets equals the European call)");
    }
    if (time_steps < 16) {
        fail(ErrorCode::InvalidArgument, "time_steps must be >= 16");
    }
}

}  // namespace

std::vector<double> default_abscissa(const CharacteristicModel& model) {
    std::vector<double> a(model.dimension());
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Strip s = intersect(Strip{0.0, kInf}, model.mellin_strip(j));
        a[j] = s.contains(2.0) ? 2.0 : 0.5 * (s.lo + std::min(s.hi, 4.0));
    }
    return a;
}

MellinFunction european_integrand(const OptionSpec& spec, const CharacteristicModel& model, double tau) {
    const auto& payoff = PayoffRegistry::instance().get("basket_put");
    const std::size_t n = spec.dimension();
    MellinFunction f;
    f.strip.resize(n);
    for (std::size_t j = 0; j < n; ++j) f.strip[j] = intersect(payoff.strip(j), model.mellin_strip(j));
    const double fwd = model.drift_convention() == DriftConvention::martingale ? 1.0 : 0.0;
    const double strike = spec.strike;
    const double rate = spec.rate;
    const CharacteristicModel* m = &model;
    auto log_transform = payoff.log_transform;
    // Mellin symbol of the pricing operator: -Psi(w i) - r sum w - r (the
    // middle term is the forward drift r of log S under the martingale
    // convention).
    auto log_symbol = [=](std::span<const cplx> w) {
        std::array<cplx, kMaxDimension> iw{};
        cplx s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            iw[j] = kI * w[j];
            s += w[j];
        }
        return -tau * m->exponent(std::span<const cplx>(iw.data(), w.size())) - fwd * rate * tau * s - rate * tau;
    };
    f.evaluator = [=](std::span<const cplx> w) { return std::exp(log_transform(w, strike) + log_symbol(w)); };
    if (payoff.factorization) {
        f.factorization = payoff.factorization(strike);
        f.factorization->log_cross = log_symbol;
    }
    return f;
}

std::vector<PricingResult> price_european(const OptionSpec& spec,
                                          const CharacteristicModel& model,
                                          const ContourSpec& contour_in,
                                          const std::vector<std::vector<double>>& spots) {
    check_inputs(spec, model);
    std::vector<PricingResult> out;
    out.reserve(spots.size());
    for (const auto& s : spots) {
        if (s.size() != spec.dimension()) fail(ErrorCode::InvalidArgument, "spot has the wrong dimension");
        for (double x : s) {
            if (!(x > 0.0)) fail(ErrorCode::InvalidArgument, "spots must be > 0");
        }
    }
    if (spec.maturity == 0.0) {
        for (const auto& s : spots) out.push_back(payoff_result(spec, s));
        return out;
    }
    const ContourSpec contour = with_abscissa(contour_in, model);
    const auto f = european_integrand(spec, model, spec.maturity);
    const ContourSpec resolved = resolve_contour(f, contour);
    const auto inv = inverse_mellin(f, resolved, spots);
    for (std::size_t p = 0; p < spots.size(); ++p) {
        PricingResult r;
        double value = inv[p].value;
        if (spec.kind == PayoffKind::basket_call) {
            OptionSpec at = spec;
            at.spot = spots[p];
            value = call_from_parity(value, at, model);
        }
        r.price = value;
        r.european_part = value;
        r.premium_part = 0.0;
        r.diagnostics.nodes = inv[p].diagnostics.nodes;
        r.diagnostics.half_width = inv[p].diagnostics.half_width;
        r.diagnostics.abscissa = resolved.abscissa;
        r.diagnostics.imaginary_residue = inv[p].diagnostics.imaginary_residue;
        r.diagnostics.accuracy_warning = inv[p].diagnostics.accuracy_warning;
        std::size_t points = 1;
        for (int nn : resolved.nodes) points *= static_cast<std::size_t>(nn);
        r.diagnostics.lattice_points = resolved.exploit_symmetry ? points / 2 : points;
        out.push_back(std::move(r));
    }
    return out;
}

PricingResult price_european(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour) {
    return price_european(spec, model, contour, {spec.spot}).front();
}

BoundaryCurve solve_boundary(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour,
                             int time_steps) {
    check_inputs(spec, model);
    check_american(spec, time_steps);
    if (!(spec.rate > 0.0)) {
        fail(ErrorCode::InvalidArgument, "the exercise boundary is only defined for r > 0");
    }
    if (!(spec.maturity > 0.0)) {
        fail(ErrorCode::InvalidArgument, "the exercise boundary needs a positive maturity");
    }
    EarlyExerciseSolver solver(spec, model, with_abscissa(contour, model), time_steps);
    return solver.solve();
}

std::vector<PricingResult> price_american(const OptionSpec& spec,
                                          const CharacteristicModel& model,
                                          const ContourSpec& contour_in,
                                          int time_steps,
                                          const std::vector<std::vector<double>>& spots) {
    check_inputs(spec, model);
    check_american(spec, time_steps);
    auto results = price_european(spec, model, contour_in, spots);
    if (spec.maturity == 0.0) return results;
    for (auto& r : results) r.diagnostics.time_steps = time_steps;
    if (spec.rate == 0.0) {
        for (auto& r : results) r.diagnostics.note = "r = 0: no early-exercise premium for the put";
        return results;
    }
    const ContourSpec contour = with_abscissa(contour_in, model);
    EarlyExerciseSolver solver(spec, model, contour, time_steps);
    const BoundaryCurve curve = solver.solve();
    // Duhamel's principle applied to V_tau = L V - f with the source
    // f = -r K 1{exercise region} gives V = e^{tau L} theta - int e^{(tau-s) L} f ds.
    // Using the transform of f (negative), the premium is therefore
    // + r K int e^{-r u} P(S_u in exercise region) du >= 0.
    const auto premium = solver.premium(spots);
    for (std::size_t p = 0; p < results.size(); ++p) {
        auto& r = results[p];
        r.premium_part = premium[p];
        r.price = r.european_part + r.premium_part;
        // Holding is never worth less than exercising. With jumps the rK source
        // omits the overshoot into the continuation region, so the integral
        // form can dip below the payoff near and inside the exercise region.
        double aggregate = 0.0;
        for (double x : spots[p]) aggregate += x;
        const double intrinsic = spec.strike - aggregate;
        if (intrinsic > r.price) {
            r.diagnostics.note = fmt_shortfall(intrinsic - r.price, aggregate <= curve.s_star.back());
            r.price = intrinsic;
            r.premium_part = intrinsic - r.european_part;
        }
        r.diagnostics.boundary_iterations = curve.iterations;
        r.diagnostics.boundary_times = curve.times;
        r.diagnostics.boundary_values = curve.s_star;
        r.diagnostics.lattice_points += solver.lattice_points();
    }
    return results;
}

PricingResult price_american(const OptionSpec& spec,
                             const CharacteristicModel& model,
                             const ContourSpec& contour,
                             int time_steps) {
    return price_american(spec, model, contour, time_steps, {spec.spot}).front();
}

PricingResult price(const OptionSpec& spec,
                    const CharacteristicModel& model,
                    const ContourSpec& contour,
                    int time_steps) {
    if (spec.style == ExerciseStyle::american) {
        if (spec.kind == PayoffKind::basket_call) {
            fail(ErrorCode::UnsupportedStyle,
                 "American basket calls are not priced (put-call parity is an inequality)");
        }
        return price_american(spec, model, contour, time_steps);
    }
    return price_european(spec, model, contour);
}

}  // namespace mellin
