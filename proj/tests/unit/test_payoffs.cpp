#include <doctest.h>

#include "mellin/error.hpp"
#include "mellin/levy_model.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/payoffs.hpp"

#include <cmath>

using namespace mellin;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Config;
}

OptionSpec put_spec(std::vector<double> spot) {
    OptionSpec s;
    s.strike = 100.0;
    s.maturity = 1.0;
    s.rate = 0.05;
    s.spot = std::move(spot);
    return s;
}

}  // namespace

TEST_CASE("payoff functions") {
    const double a[] = {30.0, 50.0};
    CHECK(basket_put_payoff(a, 100.0) == 20.0);
    CHECK(basket_call_payoff(a, 100.0) == 0.0);
    const double b[] = {70.0, 50.0};
    CHECK(basket_put_payoff(b, 100.0) == 0.0);
    CHECK(basket_call_payoff(b, 100.0) == 20.0);
}

TEST_CASE("option validation") {
    CHECK_NOTHROW(validate_option(put_spec({100.0})));
    auto s = put_spec({100.0});
    s.strike = -1.0;
    CHECK(code_of([&] { validate_option(s); }) == ErrorCode::InvalidArgument);
    s = put_spec({});
    CHECK(code_of([&] { validate_option(s); }) == ErrorCode::InvalidArgument);
    s = put_spec({100.0, 0.0});
    CHECK(code_of([&] { validate_option(s); }) == ErrorCode::InvalidArgument);
    s = put_spec({100.0});
    s.maturity = -0.1;
    CHECK(code_of([&] { validate_option(s); }) == ErrorCode::InvalidArgument);
    s.maturity = 0.0;
    CHECK_NOTHROW(validate_option(s));
    s.rate = std::nan("");
    CHECK(code_of([&] { validate_option(s); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("one-asset transform in closed form") {
    // int_0^K (K - S) S^{w-1} dS = K^{1+w} / (w (1 + w))
    for (cplx w : {cplx(0.5, 0.0), cplx(2.0, 3.0), cplx(1.2, -17.0)}) {
        const cplx arg[] = {w};
        const cplx want = std::pow(cplx(100.0), 1.0 + w) / (w * (1.0 + w));
        CHECK(std::abs(basket_put_transform(arg, 100.0) - want) <= 1e-12 * std::abs(want));
    }
}

TEST_CASE("two-asset transform against direct quadrature") {
    // int_{S1 + S2 < K} (K - S1 - S2) S1^{w1-1} S2^{w2-1} at real w, by the
    // substitution S1 = K u v, S2 = K u (1 - v), midpoint rule in (u, v).
    const double K = 2.0, w1 = 1.5, w2 = 2.5;
    const int N = 2000;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double u = (i + 0.5) / N;
        for (int j = 0; j < N; ++j) {
            const double v = (j + 0.5) / N;
            const double s1 = K * u * v, s2 = K * u * (1.0 - v);
            acc += (K - s1 - s2) * std::pow(s1, w1 - 1.0) * std::pow(s2, w2 - 1.0) * K * K * u;
        }
    }
    acc /= double(N) * N;
    const cplx w[] = {w1, w2};
    CHECK(basket_put_transform(w, K).real() == doctest::Approx(acc).epsilon(1e-5));
}

TEST_CASE("transform strip and conjugate symmetry") {
    const cplx bad[] = {cplx(-0.1, 1.0), 1.0};
    CHECK(code_of([&] { basket_put_transform(bad, 100.0); }) == ErrorCode::StripViolation);
    const cplx w[] = {cplx(0.7, 3.0), cplx(1.1, -2.0), cplx(0.4, 9.0)};
    const cplx wc[] = {std::conj(w[0]), std::conj(w[1]), std::conj(w[2])};
    CHECK(std::abs(basket_put_transform(wc, 80.0) - std::conj(basket_put_transform(w, 80.0))) < 1e-14);
    const auto f = basket_put_mellin(3, 80.0);
    REQUIRE(f.factorization.has_value());
    cplx log_sum = f.factorization->log_coupling(w[0] + w[1] + w[2]);
    for (std::size_t j = 0; j < 3; ++j) log_sum += f.factorization->log_factor(j, w[j]);
    CHECK(std::abs(std::exp(log_sum) - f(w)) <= 1e-12 * std::abs(f(w)));
}

TEST_CASE("round trip through the inverse transform") {
    for (std::size_t n : {1u, 2u}) {
        const auto f = basket_put_mellin(n, 100.0);
        ContourSpec c;
        c.abscissa.assign(n, 0.5);
        c.half_width.assign(n, 400.0);
        c.step = 0.2;
        std::vector<std::vector<double>> pts;
        for (double total : {10.0, 35.0, 60.0, 90.0}) pts.push_back(std::vector<double>(n, total / n));
        const auto res = inverse_mellin(f, c, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double want = basket_put_payoff(pts[i], 100.0);
            CAPTURE(n);
            CAPTURE(pts[i][0]);
            CHECK(std::abs(res[i].value - want) <= std::max(1e-3 * want, 1e-6 * 100.0));
        }
    }
}

TEST_CASE("exercise source transform") {
    const cplx w[] = {cplx(0.8, 2.0)};
    CHECK(exercise_source_transform(w, 100.0, 0.0, 90.0) == cplx(0.0));
    const cplx want = -0.05 * 100.0 * std::pow(cplx(90.0), w[0]) / w[0];
    CHECK(std::abs(exercise_source_transform(w, 100.0, 0.05, 90.0) - want) <= 1e-12 * std::abs(want));
    CHECK(code_of([&] { exercise_source_transform(w, 100.0, 0.05, 0.0); }) == ErrorCode::InvalidArgument);

    MellinFunction f;
    f.strip = {Strip{0.0, kInf}};
    f.evaluator = [](std::span<const cplx> z) { return exercise_source_transform(z, 100.0, 0.05, 90.0); };
    ContourSpec c;
    c.abscissa = {0.5};
    c.half_width = {2000.0};
    c.step = 0.05;
    // truncation leaves a ringing term decaying like 1 / |log(S / s_star)|
    for (double s : {20.0, 45.0}) {
        const double x[] = {s};
        CHECK(inverse_mellin(f, c, x).value == doctest::Approx(-5.0).epsilon(1e-3));
    }
    for (double s : {180.0, 400.0}) {
        const double x[] = {s};
        CHECK(std::abs(inverse_mellin(f, c, x).value) < 5e-3);
    }
}

TEST_CASE("put-call parity helper") {
    const auto m = LevyModel::risk_neutral({0.2}, Eigen::MatrixXd::Identity(1, 1), {}, 0.05);
    auto spec = put_spec({95.0});
    const double call = call_from_parity(4.0, spec, m);
    CHECK(call == doctest::Approx(4.0 + 95.0 - 100.0 * std::exp(-0.05)).epsilon(1e-15));
    spec.style = ExerciseStyle::american;
    CHECK(code_of([&] { call_from_parity(4.0, spec, m); }) == ErrorCode::UnsupportedStyle);
    spec.style = ExerciseStyle::european;
    const auto lit = LevyModel::risk_neutral({0.2}, Eigen::MatrixXd::Identity(1, 1), {}, 0.05,
                                             DriftConvention::paper_literal);
    CHECK(code_of([&] { call_from_parity(4.0, spec, lit); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("payoff registry") {
    auto& reg = PayoffRegistry::instance();
    REQUIRE(reg.contains("basket_put"));
    const auto& put = reg.get("basket_put");
    const double s[] = {40.0};
    CHECK(put.direct(s, 100.0) == 60.0);
    CHECK(put.strip(0).lo == 0.0);
    CHECK(code_of([&] { reg.get("digital"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { reg.add(PayoffDefinition{"broken", {}, {}, {}}); }) == ErrorCode::InvalidArgument);

    reg.add(PayoffDefinition{
        "scaled_put",
        [](std::span<const double> x, double k) { return 2.0 * basket_put_payoff(x, k); },
        [](std::span<const cplx> w, double k) { return std::log(2.0) + log_basket_put_transform(w, k); },
        [](std::size_t) { return Strip{0.0, kInf}; },
    });
    const cplx w[] = {cplx(1.0, 1.0)};
    CHECK(std::abs(std::exp(reg.get("scaled_put").log_transform(w, 50.0)) - 2.0 * basket_put_transform(w, 50.0)) <
          1e-9);
}
