#include <doctest.h>

#include "mellin/error.hpp"
#include "mellin/levy_model.hpp"
#include "mellin/oracles.hpp"

#include <cmath>
#include <random>

using namespace mellin;

namespace {

constexpr cplx I{0.0, 1.0};

Eigen::MatrixXd corr2(double rho) {
    Eigen::MatrixXd c(2, 2);
    c << 1.0, rho, rho, 1.0;
    return c;
}

LevyModel gbm1(double sigma = 0.2) {
    return LevyModel::risk_neutral({sigma}, Eigen::MatrixXd::Identity(1, 1), {}, 0.05);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("exponent at the origin and martingale point") {
    const auto m = gbm1();
    const cplx zero[] = {0.0};
    CHECK(std::abs(char_exponent(m, zero)) == doctest::Approx(0.0));
    const cplx minus_i[] = {-I};
    CHECK(std::abs(char_exponent(m, minus_i)) < 1e-15);
}

TEST_CASE("hand-evaluated GBM exponent") {
    const auto m = gbm1();
    CHECK(m.triplet().drift[0] == doctest::Approx(-0.02).epsilon(1e-15));
    const cplx one[] = {1.0};
    const cplx psi = char_exponent(m, one);
    CHECK(psi.real() == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(psi.imag() == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("calibrated drift") {
    const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
    const std::vector<JumpSpec> none{NoJumps{}};
    for (double s : {0.05, 0.2, 0.7}) {
        const double vols[] = {s};
        CHECK(calibrate_drift(vols, one, none, 0.03)[0] == doctest::Approx(-0.5 * s * s).epsilon(1e-15));
    }
    const double vols[] = {0.2};
    const std::vector<JumpSpec> zero_merton{MertonJumps{0.0, -0.1, 0.2}};
    CHECK(calibrate_drift(vols, one, zero_merton, 0.03)[0] == calibrate_drift(vols, one, none, 0.03)[0]);
    const std::vector<JumpSpec> bad_kou{KouJumps{1.0, 0.5, 0.9, 5.0}};
    CHECK(code_of([&] { calibrate_drift(vols, one, bad_kou, 0.03); }) == ErrorCode::InfiniteIntegral);
    // the literal convention subtracts r on top
    CHECK(calibrate_drift(vols, one, none, 0.03, DriftConvention::paper_literal)[0] ==
          doctest::Approx(-0.02 - 0.03).epsilon(1e-15));
}

TEST_CASE("martingale normalisation for every shipped family") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int draw = 0; draw < 30; ++draw) {
        const double sigma = 0.05 + 0.6 * U(rng);
        const std::vector<JumpSpec> specs{
            NoJumps{},
            MertonJumps{3.0 * U(rng), -0.3 + 0.6 * U(rng), 0.02 + 0.4 * U(rng)},
            KouJumps{3.0 * U(rng), U(rng), 1.5 + 20.0 * U(rng), 0.5 + 20.0 * U(rng)},
        };
        for (const auto& js : specs) {
            const auto m = LevyModel::risk_neutral({sigma}, Eigen::MatrixXd::Identity(1, 1), {js}, 0.04);
            const cplx u[] = {-I};
            CHECK(std::abs(char_exponent(m, u)) < 1e-12);
        }
    }
}

TEST_CASE("input errors") {
    const auto m = gbm1();
    const cplx bad[] = {cplx(std::nan(""), 0.0)};
    CHECK(code_of([&] { char_exponent(m, bad); }) == ErrorCode::InvalidArgument);

    const auto kou = LevyModel::risk_neutral({0.2, 0.3}, corr2(0.1), {NoJumps{}, KouJumps{1.0, 0.4, 10.0, 5.0}}, 0.05);
    const cplx pole[] = {0.0, -10.0 * I};  // eta1 - i u = 0 in asset 1
    try {
        char_exponent(kou, pole);
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Domain);
        CHECK(std::string(e.what()).find("component 1") != std::string::npos);
    }
}

TEST_CASE("triplet validation") {
    CHECK(code_of([] { LevyModel::risk_neutral({0.0}, Eigen::MatrixXd::Identity(1, 1), {}, 0.0); }) ==
          ErrorCode::NotPositiveDefinite);
    CHECK(code_of([] { LevyModel::risk_neutral({0.2, 0.2}, corr2(1.0), {}, 0.0); }) == ErrorCode::NotPositiveDefinite);
    Eigen::MatrixXd bad(3, 3);
    bad << 1, 0.9, -0.9, 0.9, 1, 0.9, -0.9, 0.9, 1;
    try {
        validate_correlation(bad);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("eigenvalue") != std::string::npos);
    }
    Eigen::MatrixXd asym = corr2(0.2);
    asym(0, 1) = 0.3;
    CHECK_THROWS_AS(validate_correlation(asym), Error);
}

TEST_CASE("char_function basics") {
    const auto m = gbm1();
    const cplx u[] = {cplx(0.3, -0.7)};
    CHECK(char_function(m, u, 0.0) == cplx(1.0));
    const cplx mi[] = {-I};
    CHECK(std::abs(char_function(m, mi, 7.3) - 1.0) < 1e-13);

    const auto m2 = LevyModel::risk_neutral({0.2, 0.35}, corr2(0.0), {}, 0.05);
    const cplx u2[] = {cplx(1.3, 0.2), 0.0};
    const cplx u1[] = {cplx(1.3, 0.2)};
    CHECK(std::abs(char_function(m2, u2, 0.8) - char_function(m, u1, 0.8)) < 1e-15);

    const cplx huge[] = {cplx(0.0, 0.0) + 100.0};
    CHECK(code_of([&] { char_function(m, huge, -1.0); }) == ErrorCode::InvalidArgument);
    const cplx grow[] = {cplx(0.0, 300.0)};
    CHECK(code_of([&] { char_function(m, grow, 1.0); }) == ErrorCode::Overflow);
}

TEST_CASE("GBM closed form against a second implementation") {
    const double sigma = 0.27, mu = -0.5 * sigma * sigma;
    const auto m = gbm1(sigma);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (int k = 0; k < 20; ++k) {
        const double u = 3.0 * z(rng), t = 0.1 + std::abs(z(rng));
        const cplx direct = std::exp(cplx(-0.5 * sigma * sigma * u * u * t, u * mu * t));
        const cplx arg[] = {u};
        CHECK(std::abs(char_function(m, arg, t) - direct) < 1e-14);
    }
}

TEST_CASE("Hermitian symmetry and the semigroup property") {
    const auto m = LevyModel::risk_neutral({0.2, 0.3}, corr2(-0.4),
                                           {MertonJumps{0.7, -0.05, 0.2}, KouJumps{1.2, 0.3, 12.0, 6.0}}, 0.02);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> z;
    for (int k = 0; k < 25; ++k) {
        const cplx u[] = {2.0 * z(rng), 2.0 * z(rng)};
        const cplx v[] = {-u[0], -u[1]};
        const cplx a = char_exponent(m, u), b = char_exponent(m, v);
        CHECK(std::abs(std::conj(a) - b) < 1e-12 * (1.0 + std::abs(a)));
        const double s = 0.3, t = 1.1;
        const cplx lhs = char_function(m, u, s + t);
        const cplx rhs = char_function(m, u, s) * char_function(m, u, t);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs) + 1e-300);
    }
}

TEST_CASE("sampled increments: mean and covariance") {
    const auto m = LevyModel::risk_neutral({0.2, 0.3}, corr2(0.6), {}, 0.05);
    RngStream rng(123);
    const double dt = 0.5;
    const int N = 100000;
    auto path = levy_ito_sample(m, N * dt, dt, rng);
    REQUIRE(path.size() == std::size_t(N));
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& x : path) mean += x / dt;
    mean /= N;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const auto& x : path) {
        const Eigen::Vector2d d = x / dt - mean;
        cov += d * d.transpose();
    }
    cov /= (N - 1);
    const Eigen::MatrixXd sigma = m.covariance();
    for (int i = 0; i < 2; ++i) {
        // Var(x/dt) = Sigma_ii / dt
        const double se = std::sqrt(sigma(i, i) / dt / N);
        CHECK(std::abs(mean(i) - m.triplet().drift[i]) < 3.0 * se);
        for (int j = 0; j < 2; ++j) {
            // Var of the sample covariance of Gaussian pairs: (S_ii S_jj + S_ij^2) / N, scaled by dt^-1
            const double scale = std::sqrt((sigma(i, i) * sigma(j, j) + sigma(i, j) * sigma(i, j)) / N) / dt;
            CHECK(std::abs(cov(i, j) * dt - sigma(i, j)) < 3.0 * scale * dt);
        }
    }
}

TEST_CASE("empirical characteristic function of jump paths") {
    const auto m =
        LevyModel::risk_neutral({0.15}, Eigen::MatrixXd::Identity(1, 1), {MertonJumps{2.0, -0.1, 0.15}}, 0.03);
    const double t = 1.0;
    const int N = 100000;
    RngStream rng(77);
    std::vector<double> x(N);
    for (int p = 0; p < N; ++p) {
        double total = 0.0;
        for (const auto& inc : levy_ito_sample(m, t, 0.25, rng)) total += inc(0);
        x[p] = total;
    }
    for (double u : {0.5, 1.0, 2.0, 4.0, 7.0}) {
        double re = 0.0, im = 0.0, re2 = 0.0, im2 = 0.0;
        for (double v : x) {
            re += std::cos(u * v);
            im += std::sin(u * v);
            re2 += std::cos(u * v) * std::cos(u * v);
            im2 += std::sin(u * v) * std::sin(u * v);
        }
        re /= N;
        im /= N;
        const double se_re = std::sqrt((re2 / N - re * re) / N);
        const double se_im = std::sqrt((im2 / N - im * im) / N);
        const cplx arg[] = {u};
        const cplx phi = char_function(m, arg, t);
        CHECK(std::abs(re - phi.real()) < 4.0 * se_re);
        CHECK(std::abs(im - phi.imag()) < 4.0 * se_im);
    }
}

TEST_CASE("zero-intensity jumps reduce to Gaussian increments") {
    const auto g = gbm1();
    const auto j = LevyModel::risk_neutral({0.2}, Eigen::MatrixXd::Identity(1, 1), {MertonJumps{0.0, 0.1, 0.1}}, 0.05);
    RngStream a(3), b(3);
    const auto pa = levy_ito_sample(g, 1.0, 0.1, a);
    const auto pb = levy_ito_sample(j, 1.0, 0.1, b);
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i](0) == pb[i](0));
}

TEST_CASE("martingale check by simulation") {
    const auto m =
        LevyModel::risk_neutral({0.25}, Eigen::MatrixXd::Identity(1, 1), {KouJumps{1.5, 0.4, 8.0, 6.0}}, 0.05);
    McConfig mc;
    mc.paths = 100000;
    mc.seed = 99;
    const McEstimate e = mc_exponential_moment(m, 0, 2.0, mc);
    CHECK(std::abs(e.price - 1.0) < 3.0 * e.std_error);
}
