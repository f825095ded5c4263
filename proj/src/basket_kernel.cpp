#include "mellin/basket_kernel.hpp"

#include "mellin/error.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/special_functions.hpp"
#include "mellin/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace mellin {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kChunks = 16;

// Runs body(chunk) for chunk = 0..chunks-1 on up to `threads` workers. The
// chunk layout never depends on the thread count.
template <class Body>
void run_chunks(int chunks, int threads, Body&& body) {
    threads = std::max(1, std::min(threads, chunks));
    if (threads == 1) {
        for (int c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (int c = t; c < chunks; c += threads) body(c);
        });
    }
    for (auto& th : pool) th.join();
}

// Unit-modulus phase e^{i theta m} for consecutive m, resynchronised
// periodically to keep the recurrence error bounded.
class PhaseWalker {
public:
    PhaseWalker(double theta, double start) : theta_(theta), m_(start) {
        current_ = std::polar(1.0, theta_ * m_);
        step_ = std::polar(1.0, theta_);
    }
    cplx value() const { return current_; }
    void advance() {
        m_ += 1.0;
        if (++count_ % 128 == 0) {
            current_ = std::polar(1.0, theta_ * m_);
        } else {
            current_ *= step_;
        }
    }

private:
    double theta_;
    double m_;
    cplx current_;
    cplx step_;
    int count_ = 0;
};

}  // namespace

BasketKernel::BasketKernel(const CharacteristicModel& model,
                           double strike,
                           double rate,
                           std::vector<double> abscissa,
                           double step,
                           double truncation_tol,
                           int threads)
    : model_(&model),
      strike_(strike),
      rate_(rate),
      abscissa_(std::move(abscissa)),
      step_(step),
      tol_(truncation_tol),
      threads_(threads),
      forward_(model.drift_convention() == DriftConvention::martingale ? 1.0 : 0.0) {
    const std::size_t n = abscissa_.size();
    if (n == 0 || n > kMaxDimension || n != model.dimension()) {
        fail(ErrorCode::UnsupportedDimension,
             "basket kernel supports 1 to 3 assets matching the model, got " + std::to_string(n));
    }
    if (!(step_ > 0.0)) fail(ErrorCode::InvalidArgument, "lattice step must be > 0");
    for (std::size_t j = 0; j < n; ++j) {
        if (!intersect(Strip{0.0, kInf}, model.mellin_strip(j)).contains(abscissa_[j])) {
            fail(ErrorCode::StripViolation,
                 "abscissa " + std::to_string(abscissa_[j]) + " outside the admissible strip of asset " +
                     std::to_string(j));
        }
    }
    if (model.separable()) cov_ = model.gaussian_covariance();
}

cplx BasketKernel::sum_w(int k_total) const {
    double a = 0.0;
    for (double x : abscissa_) a += x;
    return {a, step_ * (k_total + 0.5 * double(abscissa_.size()))};
}

cplx BasketKernel::log_premium_factor(cplx z, double u) const {
    const double n = double(abscissa_.size());
    const double log_scale = n * std::log(step_ / (2.0 * std::numbers::pi));
    return std::log(strike_) - std::log(z) - log_gamma(z) - rate_ * u + log_scale;
}

cplx BasketKernel::log_european_ratio(cplx z) const {
    return z * std::log(strike_) - std::log(1.0 + z);
}

std::vector<int> BasketKernel::half_nodes(double u) const {
    const std::size_t n = dimension();
    MellinFunction kernel;
    kernel.strip.resize(n);
    for (std::size_t j = 0; j < n; ++j) kernel.strip[j] = intersect(Strip{0.0, kInf}, model_->mellin_strip(j));
    const double rate = rate_;
    const double fwd = forward_;
    const CharacteristicModel* model = model_;
    kernel.evaluator = [model, u, rate, fwd](std::span<const cplx> w) {
        std::vector<cplx> iw(w.size());
        cplx s = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            iw[j] = kI * w[j];
            s += w[j];
        }
        return std::exp(log_multinomial_beta(w) - std::log(s) - u * model->exponent(iw) - fwd * rate * u * s);
    };
    const auto widths = choose_truncation(kernel, abscissa_, tol_);
    std::vector<int> half(n);
    for (std::size_t j = 0; j < n; ++j) {
        half[j] = std::max(8, static_cast<int>(std::ceil(widths[j] / step_)));
    }
    return half;
}

std::vector<BasketKernel::Axis> BasketKernel::axes(double u, const std::vector<int>& half) const {
    const std::size_t n = dimension();
    const bool separable = model_->separable();
    std::vector<Axis> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        Axis& ax = out[j];
        ax.first = (j + 1 == n) ? 0 : -half[j];
        const int count = (j + 1 == n) ? half[j] : 2 * half[j];
        ax.w.resize(static_cast<std::size_t>(count));
        ax.sep.resize(static_cast<std::size_t>(count));
        for (int c = 0; c < count; ++c) {
            const int k = ax.first + c;
            const cplx w(abscissa_[j], step_ * (k + 0.5));
            cplx sep = log_gamma(w) - forward_ * rate_ * u * w;
            if (separable) {
                sep += -u * model_->marginal_exponent(j, kI * w) + 0.5 * u * cov_(j, j) * w * w;
            }
            ax.w[c] = w;
            ax.sep[c] = sep;
        }
    }
    return out;
}

template <class Visit>
void BasketKernel::for_each_point(const std::vector<Axis>& ax, double u, Visit&& visit) const {
    const std::size_t n = ax.size();
    const bool separable = model_->separable();
    const int rows = static_cast<int>(ax[0].w.size());
    const int chunks = std::min(kChunks, rows);
    const int per_chunk = (rows + chunks - 1) / chunks;

    static const Axis kUnit{{cplx{0.0}}, {cplx{0.0}}, 0};
    const Axis& a1 = n > 1 ? ax[1] : kUnit;
    const Axis& a2 = n > 2 ? ax[2] : kUnit;
    const double c01 = (separable && n > 1) ? u * cov_(0, 1) : 0.0;
    const double c02 = (separable && n > 2) ? u * cov_(0, 2) : 0.0;
    const double c12 = (separable && n > 2) ? u * cov_(1, 2) : 0.0;

    run_chunks(chunks, threads_, [&](int chunk) {
        std::vector<cplx> iw(n);
        const int r_begin = chunk * per_chunk;
        const int r_end = std::min(rows, r_begin + per_chunk);
        for (int r0 = r_begin; r0 < r_end; ++r0) {
            const cplx w0 = ax[0].w[r0];
            for (std::size_t r1 = 0; r1 < a1.w.size(); ++r1) {
                const cplx w1 = a1.w[r1];
                const cplx base01 = ax[0].sep[r0] + a1.sep[r1] + c01 * w0 * w1;
                for (std::size_t r2 = 0; r2 < a2.w.size(); ++r2) {
                    const cplx w2 = a2.w[r2];
                    cplx logv = base01 + a2.sep[r2];
                    if (separable) {
                        logv += (c02 * w0 + c12 * w1) * w2;
                    } else {
                        iw[0] = kI * w0;
                        if (n > 1) iw[1] = kI * w1;
                        if (n > 2) iw[2] = kI * w2;
                        logv += -u * model_->exponent(iw);
                    }
                    const int k_total = ax[0].first + r0 + (n > 1 ? a1.first + int(r1) : 0) +
                                        (n > 2 ? a2.first + int(r2) : 0);
                    visit(chunk, k_total, logv, r0, int(r1), int(r2));
                }
            }
        }
    });
}

BasketKernel::Slice BasketKernel::slice(double u) const {
    if (!(u > 0.0)) fail(ErrorCode::InvalidArgument, "kernel slice needs u > 0");
    Slice s;
    s.u = u;
    s.half_nodes = half_nodes(u);
    const auto ax = axes(u, s.half_nodes);
    const std::size_t n = dimension();

    int k_lo = 0, k_hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        k_lo += ax[j].first;
        k_hi += ax[j].first + int(ax[j].w.size()) - 1;
    }
    const int span_k = k_hi - k_lo + 1;
    std::vector<cplx> log_factor(static_cast<std::size_t>(span_k));
    for (int k = k_lo; k <= k_hi; ++k) log_factor[k - k_lo] = log_premium_factor(sum_w(k), u);

    const int rows = static_cast<int>(ax[0].w.size());
    const int chunks = std::min(kChunks, rows);
    std::vector<std::vector<CompensatedSum<cplx>>> partial(
        static_cast<std::size_t>(chunks), std::vector<CompensatedSum<cplx>>(static_cast<std::size_t>(span_k)));

    for_each_point(ax, u, [&](int chunk, int k_total, cplx logv, int, int, int) {
        const std::size_t idx = static_cast<std::size_t>(k_total - k_lo);
        const cplx lv = logv + log_factor[idx];
        if (lv.real() < -745.0) return;
        partial[chunk][idx] += std::exp(lv);
    });

    std::vector<cplx> premium(static_cast<std::size_t>(span_k));
    double peak = 0.0;
    for (int i = 0; i < span_k; ++i) {
        CompensatedSum<cplx> total;
        for (int c = 0; c < chunks; ++c) total += partial[c][i].value();
        premium[i] = total.value();
        peak = std::max(peak, std::abs(premium[i]));
    }

    // Trim hyperplanes whose contribution is negligible.
    const double floor = 1e-17 * peak;
    int lo = 0, hi = span_k - 1;
    while (lo < hi && std::abs(premium[lo]) <= floor) ++lo;
    while (hi > lo && std::abs(premium[hi]) <= floor) --hi;

    s.k_min = k_lo + lo;
    s.premium.assign(premium.begin() + lo, premium.begin() + hi + 1);
    s.european.resize(s.premium.size());
    for (std::size_t i = 0; i < s.premium.size(); ++i) {
        s.european[i] = s.premium[i] * std::exp(log_european_ratio(sum_w(s.k_min + int(i))));
    }
    std::size_t points = 1;
    for (const auto& a : ax) points *= a.w.size();
    s.lattice_points = points;
    last_points_ = points;
    return s;
}

double BasketKernel::european_at_diagonal(const Slice& slice, double aggregate) const {
    const double n = double(dimension());
    const double lc = std::log(aggregate / n);
    double a = 0.0;
    for (double x : abscissa_) a += x;
    // c^{-z} = c^{-A} e^{-i h (k + n/2) ln c}
    PhaseWalker phase(-step_ * lc, slice.k_min + 0.5 * n);
    CompensatedSum<cplx> total;
    for (const cplx& e : slice.european) {
        total += e * phase.value();
        phase.advance();
    }
    return 2.0 * std::exp(-a * lc) * total.value().real();
}

double BasketKernel::premium_at_diagonal(const Slice& slice, double boundary, double aggregate) const {
    const double n = double(dimension());
    const double lr = std::log(boundary / (aggregate / n));
    double a = 0.0;
    for (double x : abscissa_) a += x;
    PhaseWalker phase(step_ * lr, slice.k_min + 0.5 * n);
    CompensatedSum<cplx> total;
    for (const cplx& p : slice.premium) {
        total += p * phase.value();
        phase.advance();
    }
    return rate_ * 2.0 * std::exp(a * lr) * total.value().real();
}

std::vector<double> BasketKernel::contract(double u,
                                           std::span<const BoundaryTerm> terms,
                                           double european_weight,
                                           const std::vector<std::vector<double>>& spots) const {
    const std::size_t n = dimension();
    for (const auto& s : spots) {
        if (s.size() != n) fail(ErrorCode::InvalidArgument, "contract: spot has the wrong dimension");
    }
    const auto half = half_nodes(u);
    const auto ax = axes(u, half);

    int k_lo = 0, k_hi = 0;
    for (std::size_t j = 0; j < n; ++j) {
        k_lo += ax[j].first;
        k_hi += ax[j].first + int(ax[j].w.size()) - 1;
    }
    const int span_k = k_hi - k_lo + 1;
    // Per hyperplane: log factor and the combined coefficient multiplying it.
    std::vector<cplx> log_factor(static_cast<std::size_t>(span_k));
    std::vector<cplx> coeff(static_cast<std::size_t>(span_k));
    for (int k = k_lo; k <= k_hi; ++k) {
        const cplx z = sum_w(k);
        log_factor[k - k_lo] = log_premium_factor(z, u);
        cplx c = european_weight != 0.0 ? european_weight * std::exp(log_european_ratio(z)) : cplx{0.0};
        for (const auto& t : terms) {
            if (t.weight == 0.0) continue;
            c += rate_ * t.weight * std::exp(z * std::log(t.boundary));
        }
        coeff[k - k_lo] = c;
    }

    // x_j^{-w_j} per spot and axis node.
    const std::size_t np = spots.size();
    std::vector<std::vector<std::vector<cplx>>> powers(np, std::vector<std::vector<cplx>>(3));
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (j < n) {
                const double lx = std::log(spots[p][j]);
                powers[p][j].resize(ax[j].w.size());
                for (std::size_t c = 0; c < ax[j].w.size(); ++c) powers[p][j][c] = std::exp(-ax[j].w[c] * lx);
            } else {
                powers[p][j].assign(1, cplx{1.0});
            }
        }
    }

    const int rows = static_cast<int>(ax[0].w.size());
    const int chunks = std::min(kChunks, rows);
    // Only the real part of the sum is needed, so each term is reduced to
    // Re(v x0 x1 x2) with explicit real arithmetic.
    std::vector<std::vector<CompensatedSum<double>>> partial(
        static_cast<std::size_t>(chunks), std::vector<CompensatedSum<double>>(np));

    for_each_point(ax, u, [&](int chunk, int k_total, cplx logv, int r0, int r1, int r2) {
        const std::size_t idx = static_cast<std::size_t>(k_total - k_lo);
        const cplx lv = logv + log_factor[idx];
        if (lv.real() < -745.0) return;
        const cplx e = std::exp(lv);
        const cplx& c = coeff[idx];
        const double vr = e.real() * c.real() - e.imag() * c.imag();
        const double vi = e.real() * c.imag() + e.imag() * c.real();
        auto& acc = partial[chunk];
        for (std::size_t p = 0; p < np; ++p) {
            const cplx& a = powers[p][0][r0];
            const cplx& b = powers[p][1][r1];
            double xr = a.real() * b.real() - a.imag() * b.imag();
            double xi = a.real() * b.imag() + a.imag() * b.real();
            if (n == 3) {
                const cplx& d = powers[p][2][r2];
                const double tr = xr * d.real() - xi * d.imag();
                xi = xr * d.imag() + xi * d.real();
                xr = tr;
            }
            acc[p] += vr * xr - vi * xi;
        }
    });

    std::size_t points = 1;
    for (const auto& a : ax) points *= a.w.size();
    last_points_ = points;

    std::vector<double> out(np);
    for (std::size_t p = 0; p < np; ++p) {
        CompensatedSum<double> total;
        for (int c = 0; c < chunks; ++c) total += partial[c][p].value();
        out[p] = 2.0 * total.value();
    }
    return out;
}

}  // namespace mellin

