#include <doctest.h>

#include "mellin/error.hpp"
#include "mellin/mellin_transform.hpp"
#include "mellin/special_functions.hpp"
#include "mellin/summation.hpp"
#include "oracles/log_gamma_reference.hpp"

#include <cmath>
#include <numbers>

using namespace mellin;

namespace {

// f(x) = exp(-sum x_j) has transform prod Gamma(w_j) on Re w_j > 0.
MellinFunction exp_product(std::size_t n) {
    MellinFunction f;
    f.strip.assign(n, Strip{0.0, kInf});
    f.evaluator = [](std::span<const cplx> w) {
        cplx acc = 0.0;
        for (cplx z : w) acc += log_gamma(z);
        return std::exp(acc);
    };
    return f;
}

// f(x) = 1 / (1 + x) has transform pi / sin(pi w) on 0 < Re w < 1.
MellinFunction reciprocal() {
    MellinFunction f;
    f.strip = {Strip{0.0, 1.0}};
    f.evaluator = [](std::span<const cplx> w) { return std::numbers::pi / std::sin(std::numbers::pi * w[0]); };
    return f;
}

}  // namespace

TEST_CASE("log_gamma against the frozen high-precision table") {
    for (const auto& r : kLogGammaReference) {
        const cplx got = log_gamma({r.re, r.im});
        const cplx want{r.lg_re, r.lg_im};
        CAPTURE(r.re);
        CAPTURE(r.im);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("log_gamma poles and invalid input") {
    for (double z : {0.0, -1.0, -7.0}) {
        try {
            log_gamma(z);
            FAIL("expected a pole");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Domain);
        }
    }
    CHECK_THROWS_AS(log_gamma(cplx(std::nan(""), 1.0)), Error);
    CHECK(std::isfinite(std::abs(log_gamma(cplx(-3.0, 1e-9)))));
}

TEST_CASE("multinomial beta") {
    const cplx two[] = {2.0, 3.0};
    CHECK(multinomial_beta(two).real() == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    const cplx three[] = {0.5, 0.5, 1.0};
    // Gamma(.5)^2 Gamma(1) / Gamma(2) = pi
    CHECK(multinomial_beta(three).real() == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    const cplx z[] = {cplx(1.2, 30.0), cplx(0.7, -45.0)};
    const cplx direct = std::exp(log_gamma(z[0]) + log_gamma(z[1]) - log_gamma(z[0] + z[1]));
    CHECK(std::abs(multinomial_beta(z) - direct) <= 1e-12 * std::abs(direct));
    const cplx pole[] = {1.0, -2.0};
    CHECK_THROWS_AS(multinomial_beta(pole), Error);
}

TEST_CASE("normal distribution helpers") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-14));
    CHECK(normal_cdf(-40.0) >= 0.0);
    CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("compensated summation") {
    CompensatedSum<double> s;
    s += 1.0;
    for (int i = 0; i < 10000; ++i) s += 1e-16;
    s += -1.0;
    CHECK(s.value() == doctest::Approx(1e-12).epsilon(1e-6));
    CompensatedSum<cplx> c;
    c += cplx(1e16, -1e16);
    c += cplx(1.0, 1.0);
    c += cplx(-1e16, 1e16);
    CHECK(c.value() == cplx(1.0, 1.0));
}

TEST_CASE("one-dimensional inversions of known transforms") {
    const auto f = exp_product(1);
    ContourSpec c;
    c.abscissa = {1.0};
    c.step = 0.1;
    const std::vector<std::vector<double>> xs{{0.1}, {0.5}, {1.0}, {2.0}, {5.0}};
    const auto res = inverse_mellin(f, c, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(res[i].value == doctest::Approx(std::exp(-xs[i][0])).epsilon(1e-10));
    }

    const auto g = reciprocal();
    ContourSpec cg;
    cg.abscissa = {0.5};
    cg.step = 0.05;
    for (double x : {0.2, 1.0, 3.0}) {
        const double xv[] = {x};
        CHECK(inverse_mellin(g, cg, xv).value == doctest::Approx(1.0 / (1.0 + x)).epsilon(1e-9));
    }
}

TEST_CASE("inversion is independent of the abscissa inside the strip") {
    const auto f = exp_product(1);
    const double x[] = {0.8};
    double ref = 0.0;
    for (double a : {0.3, 1.0, 2.5}) {
        ContourSpec c;
        c.abscissa = {a};
        c.step = 0.05;
        const double v = inverse_mellin(f, c, x).value;
        if (a == 0.3) ref = v;
        CHECK(v == doctest::Approx(ref).epsilon(1e-9));
    }
    CHECK(ref == doctest::Approx(std::exp(-0.8)).epsilon(1e-9));
}

TEST_CASE("two-dimensional tensor inversion") {
    const auto f = exp_product(2);
    ContourSpec c;
    c.abscissa = {1.0, 1.0};
    c.step = 0.15;
    const double x[] = {0.4, 0.9};
    CHECK(inverse_mellin(f, c, x).value == doctest::Approx(std::exp(-1.3)).epsilon(1e-8));
}

TEST_CASE("factorized convolution path agrees with the tensor sum") {
    auto plain = exp_product(2);
    auto fact = plain;
    fact.factorization = SumFactorization{
        [](std::size_t, cplx w) { return log_gamma(w); }, [](cplx) { return cplx(0.0); }, std::numbers::pi / 2.0};
    ContourSpec c;
    c.abscissa = {0.8, 0.8};
    c.half_width = {40.0, 40.0};
    c.nodes = {400, 400};
    const std::vector<std::vector<double>> pts{{0.4, 0.9}, {2.0, 0.1}, {1.5, 1.5}};
    const auto a = inverse_mellin(plain, c, pts);
    const auto b = inverse_mellin(fact, c, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(b[i].value == doctest::Approx(a[i].value).epsilon(1e-10));
        CHECK(b[i].value == doctest::Approx(std::exp(-pts[i][0] - pts[i][1])).epsilon(1e-8));
    }

    auto fact3 = exp_product(3);
    fact3.factorization = fact.factorization;
    ContourSpec c3;
    c3.abscissa = {1.0, 1.0, 1.0};
    c3.half_width = {40.0, 40.0, 40.0};
    c3.nodes = {400, 400, 400};
    const double x3[] = {0.4, 0.9, 1.4};
    CHECK(inverse_mellin(fact3, c3, x3).value == doctest::Approx(std::exp(-2.7)).epsilon(1e-8));
}

TEST_CASE("tabulated factors with a cross term agree with direct evaluation") {
    // Gamma factors, a coupling in sum w and a non-separable Gaussian term.
    auto log_cross = [](std::span<const cplx> w) {
        cplx q{};
        for (std::size_t j = 1; j < w.size(); ++j) q += (w[j] - w[0]) * (w[j] - w[0]);
        return 0.05 * q;
    };
    auto coupling = [](cplx z) { return -std::log(1.0 + z); };
    for (std::size_t n : {2u, 3u}) {
        CAPTURE(n);
        MellinFunction plain;
        plain.strip.assign(n, Strip{0.0, kInf});
        plain.evaluator = [=](std::span<const cplx> w) {
            cplx lv = log_cross(w);
            cplx s{};
            for (const cplx& x : w) {
                lv += log_gamma(x);
                s += x;
            }
            return std::exp(lv + coupling(s));
        };
        MellinFunction fact = plain;
        fact.factorization = SumFactorization{[](std::size_t, cplx w) { return log_gamma(w); }, coupling,
                                              std::numbers::pi / 2.0, log_cross};
        ContourSpec c;
        c.abscissa.assign(n, 0.7);
        c.half_width.assign(n, n == 2 ? 30.0 : 12.0);
        c.nodes.assign(n, n == 2 ? 300 : 120);
        const std::vector<std::vector<double>> pts{std::vector<double>(n, 0.5), std::vector<double>(n, 1.7)};
        auto a = inverse_mellin(plain, c, pts);
        auto b = inverse_mellin(fact, c, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) CHECK(b[i].value == doctest::Approx(a[i].value).epsilon(1e-12));

        // unequal steps: the coupling is evaluated per point
        c.nodes.back() += 20;
        a = inverse_mellin(plain, c, pts);
        b = inverse_mellin(fact, c, pts);
        for (std::size_t i = 0; i < pts.size(); ++i) CHECK(b[i].value == doctest::Approx(a[i].value).epsilon(1e-12));
    }
}

TEST_CASE("symmetry folding matches the full lattice") {
    const auto f = exp_product(2);
    ContourSpec folded;
    folded.abscissa = {0.7, 1.3};
    folded.step = 0.2;
    ContourSpec full = folded;
    full.exploit_symmetry = false;
    const double x[] = {0.6, 1.1};
    const auto a = inverse_mellin(f, folded, x);
    const auto b = inverse_mellin(f, full, x);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
    CHECK(a.diagnostics.imaginary_residue == 0.0);
    CHECK(b.diagnostics.imaginary_residue < 1e-12);
    CHECK_FALSE(b.diagnostics.accuracy_warning);
}

TEST_CASE("threading does not change the result") {
    const auto f = exp_product(2);
    ContourSpec c;
    c.abscissa = {1.0, 1.0};
    c.step = 0.2;
    const std::vector<std::vector<double>> pts{{0.3, 0.4}, {1.0, 2.0}, {0.2, 3.0}};
    const auto one = inverse_mellin(f, c, pts);
    c.threads = 3;
    const auto three = inverse_mellin(f, c, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(one[i].value == three[i].value);
}

TEST_CASE("contour resolution and validation") {
    const auto f = exp_product(2);
    ContourSpec c;
    c.abscissa = {1.0};
    c.step = 0.5;
    const auto r = resolve_contour(f, c);
    REQUIRE(r.abscissa.size() == 2);
    REQUIRE(r.half_width.size() == 2);
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(r.nodes[j] % 2 == 0);
        CHECK(r.nodes[j] >= 16);
        // Gamma decays like e^{-pi |t| / 2}: 1e-12 is reached before |t| = 32
        CHECK(r.half_width[j] <= 32.0);
    }

    auto code = [&](ContourSpec bad) -> ErrorCode {
        try {
            resolve_contour(f, bad);
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::Config;
    };
    ContourSpec outside;
    outside.abscissa = {-0.5, 1.0};
    CHECK(code(outside) == ErrorCode::StripViolation);
    ContourSpec odd;
    odd.abscissa = {1.0, 1.0};
    odd.half_width = {10.0, 10.0};
    odd.nodes = {17, 16};
    CHECK(code(odd) == ErrorCode::InvalidArgument);
    ContourSpec wrong_dim;
    wrong_dim.abscissa = {1.0, 1.0, 1.0};
    CHECK(code(wrong_dim) == ErrorCode::InvalidArgument);

    const auto big = exp_product(4);
    ContourSpec c4;
    c4.abscissa = {1.0};
    try {
        resolve_contour(big, c4);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnsupportedDimension);
    }

    const double bad_point[] = {-1.0, 1.0};
    CHECK_THROWS_AS(inverse_mellin(f, r, bad_point), Error);
}

TEST_CASE("truncation refuses transforms that do not decay") {
    MellinFunction flat;
    flat.strip = {Strip{0.0, 1.0}};
    flat.evaluator = [](std::span<const cplx>) { return cplx(1.0); };
    const double a[] = {0.5};
    try {
        choose_truncation(flat, a, 1e-12);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonDecaying);
    }
}
