#include "mellin/levy_model.hpp"

#include "mellin/error.hpp"
#include "mellin/special_functions.hpp"

#include <cmath>
#include <string>

namespace mellin {

namespace {

constexpr cplx kI{0.0, 1.0};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// E[J; |J| < 1] for the normalised jump law.
double truncated_mean(const MertonJumps& j) {
    const double alpha = (-1.0 - j.mean) / j.stddev;
    const double beta = (1.0 - j.mean) / j.stddev;
    return j.mean * (normal_cdf(beta) - normal_cdf(alpha)) +
           j.stddev * (normal_pdf(alpha) - normal_pdf(beta));
}

double truncated_mean(const KouJumps& j) {
    auto partial = [](double eta) { return (1.0 - std::exp(-eta) * (1.0 + eta)) / eta; };
    return j.up_prob * partial(j.up_rate) - (1.0 - j.up_prob) * partial(j.down_rate);
}

bool finite(double x) { return std::isfinite(x); }

void require_finite(std::span<const cplx> u) {
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!finite(u[k].real()) || !finite(u[k].imag())) {
            fail(ErrorCode::InvalidArgument,
                 "characteristic exponent: non-finite argument component " + std::to_string(k));
        }
    }
}

}  // namespace

void validate_jumps(const JumpSpec& jumps) {
    std::visit(overloaded{
                   [](const NoJumps&) {},
                   [](const MertonJumps& j) {
                       if (!(j.intensity >= 0.0) || !finite(j.intensity)) {
                           fail(ErrorCode::InvalidArgument, "merton: intensity must be >= 0");
                       }
                       if (!(j.stddev > 0.0) || !finite(j.stddev)) {
                           fail(ErrorCode::InvalidArgument, "merton: jump stddev must be > 0");
                       }
                       if (!finite(j.mean)) {
                           fail(ErrorCode::InvalidArgument, "merton: jump mean must be finite");
                       }
                   },
                   [](const KouJumps& j) {
                       if (!(j.intensity >= 0.0) || !finite(j.intensity)) {
                           fail(ErrorCode::InvalidArgument, "kou: intensity must be >= 0");
                       }
                       if (!(j.up_prob >= 0.0 && j.up_prob <= 1.0)) {
                           fail(ErrorCode::InvalidArgument, "kou: up probability must lie in [0, 1]");
                       }
                       if (!(j.up_rate > 1.0) || !finite(j.up_rate)) {
                           fail(ErrorCode::InfiniteIntegral,
                                "kou: up rate eta1 must exceed 1 for E[exp(J)] to be finite");
                       }
                       if (!(j.down_rate > 0.0) || !finite(j.down_rate)) {
                           fail(ErrorCode::InvalidArgument, "kou: down rate eta2 must be > 0");
                       }
                   },
               },
               jumps);
}

cplx jump_exponent(const JumpSpec& jumps, cplx u) {
    return std::visit(
        overloaded{
            [](const NoJumps&) { return cplx{0.0}; },
            [u](const MertonJumps& j) {
                if (j.intensity == 0.0) return cplx{0.0};
                const cplx cf = std::exp(kI * u * j.mean - 0.5 * j.stddev * j.stddev * u * u);
                return j.intensity * (1.0 - cf + kI * u * truncated_mean(j));
            },
            [u](const KouJumps& j) {
                if (j.intensity == 0.0) return cplx{0.0};
                const cplx up_den = j.up_rate - kI * u;
                const cplx down_den = j.down_rate + kI * u;
                const double scale = 1e-14 * (1.0 + std::abs(u));
                if (std::abs(up_den) < scale) {
                    fail(ErrorCode::Domain, "kou: u hits the pole of the up-jump factor (eta1 - i u = 0)");
                }
                if (std::abs(down_den) < scale) {
                    fail(ErrorCode::Domain,
                         "kou: u hits the pole of the down-jump factor (eta2 + i u = 0)");
                }
                const cplx cf = j.up_prob * j.up_rate / up_den +
                                (1.0 - j.up_prob) * j.down_rate / down_den;
                return j.intensity * (1.0 - cf + kI * u * truncated_mean(j));
            },
        },
        jumps);
}

double jump_compensator(const JumpSpec& jumps) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return 0.0; },
                          [](const MertonJumps& j) {
                              const double exp_moment = std::exp(j.mean + 0.5 * j.stddev * j.stddev);
                              return j.intensity * (exp_moment - 1.0 - truncated_mean(j));
                          },
                          [](const KouJumps& j) {
                              if (!(j.up_rate > 1.0)) {
                                  fail(ErrorCode::InfiniteIntegral,
                                       "kou: eta1 <= 1 makes the exponential compensator infinite");
                              }
                              const double exp_moment =
                                  j.up_prob * j.up_rate / (j.up_rate - 1.0) +
                                  (1.0 - j.up_prob) * j.down_rate / (j.down_rate + 1.0);
                              return j.intensity * (exp_moment - 1.0 - truncated_mean(j));
                          },
                      },
                      jumps);
}

Strip jump_moment_strip(const JumpSpec& jumps) {
    return std::visit(overloaded{
                          [](const NoJumps&) { return Strip{}; },
                          [](const MertonJumps&) { return Strip{}; },
                          [](const KouJumps& j) {
                              if (j.intensity == 0.0) return Strip{};
                              return Strip{-j.up_rate, j.down_rate};
                          },
                      },
                      jumps);
}

void validate_correlation(const Eigen::MatrixXd& corr) {
    if (corr.rows() != corr.cols() || corr.rows() == 0) {
        fail(ErrorCode::InvalidArgument, "correlation matrix must be square and non-empty");
    }
    const Eigen::Index n = corr.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(corr(i, i) - 1.0) > 1e-12) {
            fail(ErrorCode::InvalidArgument,
                 "correlation matrix diagonal entry " + std::to_string(i) + " is not 1");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!finite(corr(i, j)) || corr(i, j) < -1.0 || corr(i, j) > 1.0) {
                fail(ErrorCode::InvalidArgument, "correlation entries must lie in [-1, 1]");
            }
            if (std::abs(corr(i, j) - corr(j, i)) > 1e-12) {
                fail(ErrorCode::InvalidArgument, "correlation matrix is not symmetric");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    if (smallest < -1e-12) {
        fail(ErrorCode::NotPositiveDefinite,
             "correlation matrix is not positive semidefinite: eigenvalue " +
                 std::to_string(smallest));
    }
}

Eigen::MatrixXd LevyTriplet::covariance() const {
    const auto n = static_cast<Eigen::Index>(vols.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            cov(i, j) = vols[i] * corr(i, j) * vols[j];
        }
    }
    return cov;
}

void validate_triplet(const LevyTriplet& t) {
    const std::size_t n = t.vols.size();
    if (n == 0) {
        fail(ErrorCode::InvalidArgument, "model needs at least one asset");
    }
    if (t.drift.size() != n || t.jumps.size() != n ||
        static_cast<std::size_t>(t.corr.rows()) != n) {
        fail(ErrorCode::InvalidArgument, "drift, vols, correlation and jumps disagree on dimension");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t.vols[i] > 0.0) || !finite(t.vols[i])) {
            fail(ErrorCode::NotPositiveDefinite,
                 "volatility " + std::to_string(i) + " must be > 0 (Sigma must be positive definite)");
        }
        if (!finite(t.drift[i])) {
            fail(ErrorCode::InvalidArgument, "drift component " + std::to_string(i) + " is not finite");
        }
        validate_jumps(t.jumps[i]);
    }
    validate_correlation(t.corr);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t.corr, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    if (smallest <= 1e-10) {
        fail(ErrorCode::NotPositiveDefinite,
             "correlation matrix is rank deficient (smallest eigenvalue " + std::to_string(smallest) +
                 "); Sigma must be positive definite");
    }
}

std::vector<double> calibrate_drift(std::span<const double> vols,
                                    const Eigen::MatrixXd& corr,
                                    std::span<const JumpSpec> jumps,
                                    double rate,
                                    DriftConvention convention) {
    if (vols.size() != jumps.size() || static_cast<std::size_t>(corr.rows()) != vols.size()) {
        fail(ErrorCode::InvalidArgument, "calibrate_drift: dimension mismatch");
    }
    validate_correlation(corr);
    std::vector<double> drift(vols.size());
    for (std::size_t i = 0; i < vols.size(); ++i) {
        validate_jumps(jumps[i]);
        drift[i] = -0.5 * vols[i] * vols[i] - jump_compensator(jumps[i]);
        if (convention == DriftConvention::paper_literal) {
            drift[i] -= rate;
        }
    }
    return drift;
}

LevyModel::LevyModel(LevyTriplet triplet, DriftConvention convention)
    : triplet_(std::move(triplet)), convention_(convention) {
    validate_triplet(triplet_);
    covariance_ = triplet_.covariance();
    Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
    if (llt.info() != Eigen::Success) {
        fail(ErrorCode::NotPositiveDefinite, "Cholesky factorisation of Sigma failed");
    }
    cholesky_ = llt.matrixL();
}

LevyModel LevyModel::risk_neutral(std::vector<double> vols,
                                  Eigen::MatrixXd corr,
                                  std::vector<JumpSpec> jumps,
                                  double rate,
                                  DriftConvention convention) {
    if (jumps.empty()) {
        jumps.assign(vols.size(), NoJumps{});
    }
    auto drift = calibrate_drift(vols, corr, jumps, rate, convention);
    return LevyModel(LevyTriplet{std::move(drift), std::move(vols), std::move(corr), std::move(jumps)},
                     convention);
}

cplx LevyModel::marginal_exponent(std::size_t k, cplx u_k) const {
    return -kI * u_k * triplet_.drift[k] + jump_exponent(triplet_.jumps[k], u_k);
}

cplx LevyModel::exponent(std::span<const cplx> u) const {
    if (u.size() != dimension()) {
        fail(ErrorCode::InvalidArgument, "characteristic exponent: argument has wrong dimension");
    }
    require_finite(u);
    const std::size_t n = dimension();
    cplx quad = 0.0;
    cplx separate = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            quad += u[i] * covariance_(i, j) * u[j];
        }
        try {
            separate += marginal_exponent(i, u[i]);
        } catch (const Error& e) {
            fail(e.code(), std::string(e.what()) + " (asset component " + std::to_string(i) + ")");
        }
    }
    return separate + 0.5 * quad;
}

Strip LevyModel::mellin_strip(std::size_t k) const {
    return jump_moment_strip(triplet_.jumps.at(k));
}

std::string LevyModel::name() const {
    bool merton = false, kou = false;
    for (const auto& j : triplet_.jumps) {
        merton |= std::holds_alternative<MertonJumps>(j);
        kou |= std::holds_alternative<KouJumps>(j);
    }
    if (merton && kou) return "mixed";
    if (merton) return "merton";
    if (kou) return "kou";
    return "gbm";
}

cplx char_exponent(const CharacteristicModel& model, std::span<const cplx> u) {
    return model.exponent(u);
}

cplx char_function(const CharacteristicModel& model, std::span<const cplx> u, double t) {
    if (!(t >= 0.0) || !finite(t)) {
        fail(ErrorCode::InvalidArgument, "char_function: t must be finite and >= 0");
    }
    const cplx psi = model.exponent(u);
    if (t == 0.0) return 1.0;
    const cplx log_cf = -t * psi;
    if (log_cf.real() > 709.0) {
        fail(ErrorCode::Overflow,
             "char_function: exp(-t Psi) overflows (log modulus " + std::to_string(log_cf.real()) +
                 "); evaluate in log space instead");
    }
    return std::exp(log_cf);
}

IncrementSampler::IncrementSampler(const LevyModel& model, double dt)
    : model_(&model), dt_(dt) {
    if (!(dt > 0.0) || !finite(dt)) {
        fail(ErrorCode::InvalidArgument, "sampler: dt must be > 0");
    }
    scaled_cholesky_ = model.cholesky_factor() * std::sqrt(dt);
    const auto n = static_cast<Eigen::Index>(model.dimension());
    normals_.resize(n);
    gauss_.resize(n);
    // The triplet drift pairs with small jumps compensated by y 1{|y| < 1};
    // raw Poisson sums therefore need the truncated jump mean removed.
    drift_ = model.triplet().drift;
    const auto& jumps = model.triplet().jumps;
    for (std::size_t k = 0; k < jumps.size() && k < drift_.size(); ++k) {
        std::visit(overloaded{
                       [](const NoJumps&) {},
                       [&](const MertonJumps& j) { drift_[k] -= j.intensity * truncated_mean(j); },
                       [&](const KouJumps& j) { drift_[k] -= j.intensity * truncated_mean(j); },
                   },
                   jumps[k]);
    }
}

void IncrementSampler::add_jumps(RngStream& rng, std::span<double> out) {
    const auto& jumps = model_->triplet().jumps;
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        std::visit(overloaded{
                       [](const NoJumps&) {},
                       [&](const MertonJumps& j) {
                           if (j.intensity == 0.0) return;
                           std::poisson_distribution<int> count(j.intensity * dt_);
                           const int m = count(rng);
                           if (m > 0) {
                               out[k] += m * j.mean + j.stddev * std::sqrt(double(m)) * normal_(rng);
                           }
                       },
                       [&](const KouJumps& j) {
                           if (j.intensity == 0.0) return;
                           std::poisson_distribution<int> count(j.intensity * dt_);
                           const int m = count(rng);
                           for (int c = 0; c < m; ++c) {
                               const double e = -std::log(1.0 - uniform_(rng));
                               if (uniform_(rng) < j.up_prob) {
                                   out[k] += e / j.up_rate;
                               } else {
                                   out[k] -= e / j.down_rate;
                               }
                           }
                       },
                   },
                   jumps[k]);
    }
}

void IncrementSampler::sample(RngStream& rng, std::span<double> out) {
    const auto n = normals_.size();
    for (Eigen::Index i = 0; i < n; ++i) normals_[i] = normal_(rng);
    gauss_.noalias() = scaled_cholesky_.triangularView<Eigen::Lower>() * normals_;
    for (Eigen::Index i = 0; i < n; ++i) out[i] = drift_[i] * dt_ + gauss_[i];
    add_jumps(rng, out);
}

void IncrementSampler::sample_antithetic(RngStream& rng, std::span<double> out) {
    const auto n = normals_.size();
    gauss_.noalias() = scaled_cholesky_.triangularView<Eigen::Lower>() * (-normals_);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = drift_[i] * dt_ + gauss_[i];
    add_jumps(rng, out);
}

std::vector<Eigen::VectorXd> levy_ito_sample(const LevyModel& model, double t, double dt,
                                             RngStream& rng) {
    if (!(t > 0.0) || !(dt > 0.0)) {
        fail(ErrorCode::InvalidArgument, "levy_ito_sample: t and dt must be > 0");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-12));
    std::vector<Eigen::VectorXd> path;
    path.reserve(steps);
    IncrementSampler full(model, dt);
    const double last = t - dt * double(steps - 1);
    IncrementSampler tail(model, last);
    for (std::size_t s = 0; s < steps; ++s) {
        Eigen::VectorXd inc(static_cast<Eigen::Index>(model.dimension()));
        auto& sampler = (s + 1 == steps) ? tail : full;
        sampler.sample(rng, std::span<double>(inc.data(), static_cast<std::size_t>(inc.size())));
        path.push_back(std::move(inc));
    }
    return path;
}

}  // namespace mellin
