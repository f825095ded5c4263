#include "mellin/oracles.hpp"

#include "mellin/error.hpp"
#include "mellin/special_functions.hpp"
#include "mellin/summation.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace mellin {

namespace {

constexpr std::int64_t kBatch = 8192;

struct Moments {
    CompensatedSum<double> sum;
    CompensatedSum<double> sum_sq;
    std::int64_t count = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++count;
    }
};

RngStream batch_stream(std::uint64_t seed, std::int64_t batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch)};
    return RngStream(seq);
}

template <class Body>
void run_batches(std::int64_t batches, int threads, Body&& body) {
    threads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, batches)));
    if (threads == 1) {
        for (std::int64_t b = 0; b < batches; ++b) body(b);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::int64_t b = t; b < batches; b += threads) body(b);
        });
    }
    for (auto& th : pool) th.join();
}

McEstimate finish(const std::vector<Moments>& per_batch, std::int64_t samples_per_draw) {
    CompensatedSum<double> s, q;
    std::int64_t count = 0;
    for (const auto& m : per_batch) {
        s += m.sum.value();
        q += m.sum_sq.value();
        count += m.count;
    }
    McEstimate e;
    const double mean = s.value() / double(count);
    const double var = count > 1 ? std::max(0.0, (q.value() - double(count) * mean * mean) / double(count - 1)) : 0.0;
    e.price = mean;
    e.std_error = std::sqrt(var / double(count));
    e.paths = count * samples_per_draw;
    return e;
}

void check_mc(const McConfig& mc) {
    if (mc.paths < 2) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least 2 paths");
    if (mc.steps < 1) fail(ErrorCode::InvalidArgument, "Monte Carlo needs at least 1 time step");
}

// Terminal L_T (and its antithetic partner) over `steps` exact increments.
void terminal_increments(IncrementSampler& sampler,
                         RngStream& rng,
                         int steps,
                         bool antithetic,
                         std::vector<double>& a,
                         std::vector<double>& b) {
    const std::size_t n = a.size();
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    std::vector<double> inc(n);
    for (int k = 0; k < steps; ++k) {
        sampler.sample(rng, inc);
        for (std::size_t j = 0; j < n; ++j) a[j] += inc[j];
        if (antithetic) {
            sampler.sample_antithetic(rng, inc);
            for (std::size_t j = 0; j < n; ++j) b[j] += inc[j];
        }
    }
}

}  // namespace

double black_scholes_put(double spot, double strike, double rate, double sigma, double maturity) {
    if (maturity <= 0.0) return std::max(strike - spot, 0.0);
    const double sd = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / sd;
    const double d2 = d1 - sd;
    return strike * std::exp(-rate * maturity) * normal_cdf(-d2) - spot * normal_cdf(-d1);
}

double black_scholes_call(double spot, double strike, double rate, double sigma, double maturity) {
    if (maturity <= 0.0) return std::max(spot - strike, 0.0);
    const double sd = sigma * std::sqrt(maturity);
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * sigma * sigma) * maturity) / sd;
    const double d2 = d1 - sd;
    return spot * normal_cdf(d1) - strike * std::exp(-rate * maturity) * normal_cdf(d2);
}

double merton_put_series(double spot, double strike, double rate, double sigma, double maturity,
                         const MertonJumps& jumps, int terms) {
    if (maturity <= 0.0) return std::max(strike - spot, 0.0);
    const double k = std::exp(jumps.mean + 0.5 * jumps.stddev * jumps.stddev) - 1.0;
    const double lam = jumps.intensity * (1.0 + k) * maturity;
    CompensatedSum<double> total;
    double log_weight = -lam;  // log Poisson(j; lam)
    for (int j = 0; j < terms; ++j) {
        if (j > 0) log_weight += std::log(lam) - std::log(double(j));
        const double sj = std::sqrt(sigma * sigma + j * jumps.stddev * jumps.stddev / maturity);
        const double rj = rate - jumps.intensity * k + j * std::log1p(k) / maturity;
        total += std::exp(log_weight) * black_scholes_put(spot, strike, rj, sj, maturity);
        if (lam == 0.0) break;
    }
    return total.value();
}

namespace {

LatticeResult crr(double spot, double strike, double rate, double sigma, double maturity, int steps, bool american) {
    if (steps < 1) fail(ErrorCode::InvalidArgument, "binomial tree needs at least 1 step");
    if (!(spot > 0.0) || !(strike > 0.0) || !(sigma > 0.0) || !(maturity > 0.0) || !(rate >= 0.0)) {
        fail(ErrorCode::InvalidArgument, "binomial tree: spot, strike, sigma, maturity must be > 0, rate >= 0");
    }
    const double dt = maturity / steps;
    const double u = std::exp(sigma * std::sqrt(dt));
    const double d = 1.0 / u;
    const double disc = std::exp(-rate * dt);
    const double p = (std::exp(rate * dt) - d) / (u - d);
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::Domain, "binomial tree: risk-neutral probability outside (0, 1)");
    const double log_u = std::log(u);

    auto node_price = [&](int i, int j) { return spot * std::exp(log_u * (2.0 * j - i)); };
    std::vector<double> v(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) v[j] = std::max(strike - node_price(steps, j), 0.0);

    LatticeResult out;
    out.tau.resize(static_cast<std::size_t>(steps) + 1);
    out.boundary.assign(static_cast<std::size_t>(steps) + 1, std::numeric_limits<double>::quiet_NaN());
    out.tau[0] = 0.0;
    out.boundary[0] = strike;
    for (int i = steps - 1; i >= 0; --i) {
        const std::size_t slot = static_cast<std::size_t>(steps - i);
        out.tau[slot] = maturity - i * dt;
        double best = std::numeric_limits<double>::quiet_NaN();
        for (int j = 0; j <= i; ++j) {
            const double cont = disc * (p * v[j + 1] + (1.0 - p) * v[j]);
            if (american) {
                const double s = node_price(i, j);
                const double ex = strike - s;
                if (ex > 0.0 && ex >= cont) {
                    v[j] = ex;
                    // node prices increase with j; an exercised top node only
                    // bounds the boundary from below, so it stays unresolved
                    best = j == i ? std::numeric_limits<double>::quiet_NaN() : s;
                    continue;
                }
            }
            v[j] = cont;
        }
        out.boundary[slot] = best;
    }
    out.price = v[0];
    return out;
}

}  // namespace

LatticeResult binomial_american_put(double spot, double strike, double rate, double sigma, double maturity,
                                    int steps) {
    return crr(spot, strike, rate, sigma, maturity, steps, true);
}

double binomial_european_put(double spot, double strike, double rate, double sigma, double maturity, int steps) {
    return crr(spot, strike, rate, sigma, maturity, steps, false).price;
}

std::vector<double> lattice_boundary_at(const LatticeResult& lattice, std::span<const double> tau) {
    // Near the root no node may lie in the exercise region; those entries are
    // NaN and are bridged by the nearest resolved ones.
    std::vector<double> t, b;
    for (std::size_t i = 0; i < lattice.tau.size(); ++i) {
        if (std::isfinite(lattice.boundary[i])) {
            t.push_back(lattice.tau[i]);
            b.push_back(lattice.boundary[i]);
        }
    }
    std::vector<double> out;
    out.reserve(tau.size());
    if (t.empty()) {
        out.assign(tau.size(), std::numeric_limits<double>::quiet_NaN());
        return out;
    }
    for (double x : tau) {
        if (x <= t.front()) {
            out.push_back(b.front());
            continue;
        }
        if (x >= t.back()) {
            out.push_back(b.back());
            continue;
        }
        const std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
        const double w = (x - t[i - 1]) / (t[i] - t[i - 1]);
        out.push_back(b[i - 1] + w * (b[i] - b[i - 1]));
    }
    return out;
}

McEstimate mc_discounted_payoff(const OptionSpec& spec,
                                const LevyModel& model,
                                const McConfig& mc,
                                const std::function<double(std::span<const double>)>& payoff) {
    check_mc(mc);
    validate_option(spec);
    const std::size_t n = spec.dimension();
    if (model.dimension() != n) fail(ErrorCode::InvalidArgument, "Monte Carlo: model and option dimension differ");
    if (model.drift_convention() != DriftConvention::martingale) {
        fail(ErrorCode::InvalidArgument, "Monte Carlo oracle needs a martingale-calibrated model");
    }
    const double T = spec.maturity;
    const double disc = std::exp(-spec.rate * T);
    const std::int64_t draws = mc.antithetic ? (mc.paths + 1) / 2 : mc.paths;
    const std::int64_t batches = (draws + kBatch - 1) / kBatch;
    std::vector<Moments> per_batch(static_cast<std::size_t>(batches));

    run_batches(batches, mc.threads, [&](std::int64_t b) {
        RngStream rng = batch_stream(mc.seed, b);
        IncrementSampler sampler(model, T > 0.0 ? T / mc.steps : 1.0);
        std::vector<double> la(n), lb(n), sa(n), sb(n);
        const std::int64_t count = std::min(kBatch, draws - b * kBatch);
        Moments& m = per_batch[static_cast<std::size_t>(b)];
        for (std::int64_t i = 0; i < count; ++i) {
            if (T > 0.0) {
                terminal_increments(sampler, rng, mc.steps, mc.antithetic, la, lb);
            }
            for (std::size_t j = 0; j < n; ++j) {
                sa[j] = spec.spot[j] * std::exp(spec.rate * T + la[j]);
                sb[j] = spec.spot[j] * std::exp(spec.rate * T + lb[j]);
            }
            double y = payoff(sa);
            if (mc.antithetic) y = 0.5 * (y + payoff(sb));
            m.add(disc * y);
        }
    });
    return finish(per_batch, mc.antithetic ? 2 : 1);
}

McEstimate mc_european(const OptionSpec& spec, const LevyModel& model, const McConfig& mc) {
    const double strike = spec.strike;
    if (spec.kind == PayoffKind::basket_call) {
        return mc_discounted_payoff(spec, model, mc,
                                    [strike](std::span<const double> s) { return basket_call_payoff(s, strike); });
    }
    return mc_discounted_payoff(spec, model, mc,
                                [strike](std::span<const double> s) { return basket_put_payoff(s, strike); });
}

McEstimate mc_exponential_moment(const LevyModel& model, std::size_t k, double maturity, const McConfig& mc) {
    if (k >= model.dimension()) fail(ErrorCode::InvalidArgument, "mc_exponential_moment: asset index out of range");
    if (!(maturity > 0.0)) fail(ErrorCode::InvalidArgument, "mc_exponential_moment: maturity must be > 0");
    check_mc(mc);
    const std::size_t n = model.dimension();
    const std::int64_t draws = mc.antithetic ? (mc.paths + 1) / 2 : mc.paths;
    const std::int64_t batches = (draws + kBatch - 1) / kBatch;
    std::vector<Moments> per_batch(static_cast<std::size_t>(batches));
    run_batches(batches, mc.threads, [&](std::int64_t b) {
        RngStream rng = batch_stream(mc.seed, b);
        IncrementSampler sampler(model, maturity / mc.steps);
        std::vector<double> la(n), lb(n);
        const std::int64_t count = std::min(kBatch, draws - b * kBatch);
        Moments& m = per_batch[static_cast<std::size_t>(b)];
        for (std::int64_t i = 0; i < count; ++i) {
            terminal_increments(sampler, rng, mc.steps, mc.antithetic, la, lb);
            double y = std::exp(la[k]);
            if (mc.antithetic) y = 0.5 * (y + std::exp(lb[k]));
            m.add(y);
        }
    });
    return finish(per_batch, mc.antithetic ? 2 : 1);
}

namespace {

// Aggregate basket level sum_j S_j at each exercise date, per path.
// Antithetic partners are stored at consecutive rows.
Eigen::MatrixXd simulate_aggregates(const OptionSpec& spec,
                                    const LevyModel& model,
                                    const McConfig& mc,
                                    int dates,
                                    std::uint64_t seed) {
    const std::size_t n = spec.dimension();
    const double dt = spec.maturity / dates;
    const std::int64_t draws = mc.antithetic ? (mc.paths + 1) / 2 : mc.paths;
    const int width = mc.antithetic ? 2 : 1;
    Eigen::MatrixXd agg(draws * width, dates);
    const std::int64_t batches = (draws + kBatch - 1) / kBatch;
    run_batches(batches, mc.threads, [&](std::int64_t b) {
        RngStream rng = batch_stream(seed, b);
        IncrementSampler sampler(model, dt);
        std::vector<double> la(n), lb(n), inc(n);
        const std::int64_t first = b * kBatch;
        const std::int64_t count = std::min(kBatch, draws - first);
        for (std::int64_t i = 0; i < count; ++i) {
            std::fill(la.begin(), la.end(), 0.0);
            std::fill(lb.begin(), lb.end(), 0.0);
            const std::int64_t row = (first + i) * width;
            for (int k = 0; k < dates; ++k) {
                sampler.sample(rng, inc);
                for (std::size_t j = 0; j < n; ++j) la[j] += inc[j];
                if (mc.antithetic) {
                    sampler.sample_antithetic(rng, inc);
                    for (std::size_t j = 0; j < n; ++j) lb[j] += inc[j];
                }
                const double grow = spec.rate * dt * (k + 1);
                double sa = 0.0, sb = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    sa += spec.spot[j] * std::exp(grow + la[j]);
                    sb += spec.spot[j] * std::exp(grow + lb[j]);
                }
                agg(row, k) = sa;
                if (mc.antithetic) agg(row + 1, k) = sb;
            }
        }
    });
    return agg;
}

struct Regression {
    std::vector<int> columns;
    Eigen::VectorXd beta;
    bool active = false;
};

double basis(int column, double x, double strike) {
    switch (column) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x;
        default: return std::max(1.0 - x, 0.0) * strike;
    }
}

double continuation(const Regression& reg, double x, double strike) {
    double c = 0.0;
    for (std::size_t i = 0; i < reg.columns.size(); ++i) c += reg.beta(static_cast<Eigen::Index>(i)) * basis(reg.columns[i], x, strike);
    return c;
}

}  // namespace

McEstimate mc_american_lsq(const OptionSpec& spec, const LevyModel& model, const McConfig& mc, int exercise_dates) {
    check_mc(mc);
    validate_option(spec);
    if (exercise_dates < 1) fail(ErrorCode::InvalidArgument, "mc_american_lsq: exercise_dates must be >= 1");
    if (!(spec.maturity > 0.0)) fail(ErrorCode::InvalidArgument, "mc_american_lsq: maturity must be > 0");
    if (model.dimension() != spec.dimension()) fail(ErrorCode::InvalidArgument, "mc_american_lsq: dimension mismatch");
    if (model.drift_convention() != DriftConvention::martingale) {
        fail(ErrorCode::InvalidArgument, "Monte Carlo oracle needs a martingale-calibrated model");
    }
    const double K = spec.strike;
    const double disc = std::exp(-spec.rate * spec.maturity / exercise_dates);
    const int dates = exercise_dates;
    McEstimate out;

    // Fit the exercise policy on a training set.
    std::vector<Regression> policy(static_cast<std::size_t>(dates));
    {
        const Eigen::MatrixXd agg = simulate_aggregates(spec, model, mc, dates, mc.seed ^ 0x9e3779b97f4a7c15ull);
        const Eigen::Index rows = agg.rows();
        Eigen::VectorXd cash(rows);
        for (Eigen::Index p = 0; p < rows; ++p) cash(p) = std::max(K - agg(p, dates - 1), 0.0);
        bool warned = false;
        for (int k = dates - 2; k >= 0; --k) {
            cash *= disc;
            std::vector<Eigen::Index> itm;
            for (Eigen::Index p = 0; p < rows; ++p) {
                if (agg(p, k) < K) itm.push_back(p);
            }
            if (itm.size() < 8) continue;
            Eigen::MatrixXd X(static_cast<Eigen::Index>(itm.size()), 4);
            Eigen::VectorXd y(static_cast<Eigen::Index>(itm.size()));
            for (std::size_t i = 0; i < itm.size(); ++i) {
                const double x = agg(itm[i], k) / K;
                for (int c = 0; c < 4; ++c) X(Eigen::Index(i), c) = basis(c, x, K);
                y(Eigen::Index(i)) = cash(itm[i]);
            }
            // Scale columns so the rank decision is not distorted by units.
            Eigen::VectorXd scale = X.colwise().norm().transpose();
            for (int c = 0; c < 4; ++c) {
                if (scale(c) > 0.0) X.col(c) /= scale(c);
            }
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
            qr.setThreshold(1e-10);
            Regression reg;
            reg.active = true;
            if (qr.rank() < 4) {
                if (!warned) {
                    out.notes.push_back("regression basis rank-deficient; reduced to " + std::to_string(qr.rank()) +
                                        " columns");
                    warned = true;
                }
                const auto& perm = qr.colsPermutation().indices();
                for (Eigen::Index i = 0; i < qr.rank(); ++i) reg.columns.push_back(perm(i));
                std::sort(reg.columns.begin(), reg.columns.end());
            } else {
                reg.columns = {0, 1, 2, 3};
            }
            Eigen::MatrixXd Xr(X.rows(), Eigen::Index(reg.columns.size()));
            for (std::size_t c = 0; c < reg.columns.size(); ++c) Xr.col(Eigen::Index(c)) = X.col(reg.columns[c]);
            Eigen::VectorXd beta = Xr.colPivHouseholderQr().solve(y);
            for (std::size_t c = 0; c < reg.columns.size(); ++c) {
                const double s = scale(reg.columns[c]);
                beta(Eigen::Index(c)) = s > 0.0 ? beta(Eigen::Index(c)) / s : 0.0;
            }
            reg.beta = beta;
            for (std::size_t i = 0; i < itm.size(); ++i) {
                const double x = agg(itm[i], k) / K;
                const double ex = K - agg(itm[i], k);
                if (ex >= continuation(reg, x, K)) cash(itm[i]) = ex;
            }
            policy[static_cast<std::size_t>(k)] = std::move(reg);
        }
    }

    // Evaluate the fitted policy on independent paths.
    const Eigen::MatrixXd agg = simulate_aggregates(spec, model, mc, dates, mc.seed);
    const int width = mc.antithetic ? 2 : 1;
    const Eigen::Index draws = agg.rows() / width;
    Moments m;
    for (Eigen::Index d = 0; d < draws; ++d) {
        double y = 0.0;
        for (int w = 0; w < width; ++w) {
            const Eigen::Index p = d * width + w;
            double value = 0.0;
            for (int k = 0; k < dates; ++k) {
                const double s = agg(p, k);
                const double ex = K - s;
                if (k == dates - 1) {
                    value = std::pow(disc, k + 1) * std::max(ex, 0.0);
                    break;
                }
                const auto& reg = policy[static_cast<std::size_t>(k)];
                if (ex > 0.0 && reg.active && ex >= continuation(reg, s / K, K)) {
                    value = std::pow(disc, k + 1) * ex;
                    break;
                }
            }
            y += value;
        }
        m.add(y / width);
    }
    McEstimate e = finish({m}, width);
    e.notes = std::move(out.notes);
    const double intrinsic = basket_put_payoff(spec.spot, K);
    if (intrinsic > e.price) {
        e.notes.push_back("immediate exercise dominates the simulated policy");
        e.price = intrinsic;
    }
    return e;
}

}  // namespace mellin
