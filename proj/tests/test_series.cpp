#include <doctest.h>

#include <cmath>
#include <random>

#include "magwkb/config.hpp"
#include "magwkb/series.hpp"

using namespace magwkb;

namespace {

TruncatedSeries1 random_series1(std::mt19937_64& rng, int order) {
    std::uniform_real_distribution<double> u(-1, 1);
    TruncatedSeries1 s(order);
    for (int k = 0; k <= order; ++k) s.at(k) = cplx(u(rng), u(rng));
    return s;
}

TruncatedSeries2 random_series2(std::mt19937_64& rng, int order) {
    std::uniform_real_distribution<double> u(-1, 1);
    TruncatedSeries2 s(order);
    for (int m = 0; m <= order; ++m)
        for (int n = 0; m + n <= order; ++n) s.at(m, n) = cplx(u(rng), u(rng));
    return s;
}

double distance(const TruncatedSeries1& a, const TruncatedSeries1& b) { return (a - b).max_abs(); }
double distance(const TruncatedSeries2& a, const TruncatedSeries2& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("one-variable series: closed forms") {
    const int n = 12;
    const auto e = exp(TruncatedSeries1::variable(n));
    double fact = 1;
    for (int k = 0; k <= n; ++k) {
        if (k) fact *= k;
        CHECK(std::abs(e[k] - 1.0 / fact) < 1e-15);
    }
    // 1 / (1 - x) = sum x^k
    const auto geo = (TruncatedSeries1::constant(1.0, n) - TruncatedSeries1::variable(n)).reciprocal();
    for (int k = 0; k <= n; ++k) CHECK(std::abs(geo[k] - 1.0) < 1e-14);
    // log(1+x) integrates 1/(1+x)
    const auto lg = (TruncatedSeries1::constant(1.0, n) + TruncatedSeries1::variable(n)).reciprocal().integral();
    for (int k = 1; k <= n + 1; ++k) CHECK(std::abs(lg[k] - (k % 2 ? 1.0 : -1.0) / k) < 1e-14);
}

TEST_CASE("one-variable series: randomized algebraic identities") {
    std::mt19937_64 rng(magwkb_seed(101));
    std::uniform_int_distribution<int> ord(0, 10);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = ord(rng);
        const auto a = random_series1(rng, n), b = random_series1(rng, n), c = random_series1(rng, n);
        CHECK(distance((a * b) * c, a * (b * c)) < 1e-12);
        CHECK(distance(a * (b + c), a * b + a * c) < 1e-12);
        CHECK(distance((a * b).derivative(), a.derivative() * b + a * b.derivative()) < 1e-11);
        CHECK(distance(a.integral().derivative(), a) < 1e-13);
        // product against the naive convolution
        for (int k = 0; k <= n; ++k) {
            cplx s = 0;
            for (int i = 0; i <= k; ++i) s += a[i] * b[k - i];
            CHECK(std::abs((a * b)[k] - s) < 1e-12);
        }
        if (std::abs(a[0]) > 0.2) CHECK(distance(a * a.reciprocal(), TruncatedSeries1::constant(1.0, n)) < 1e-8);
    }
}

TEST_CASE("exp is a homomorphism on series without constant term") {
    std::mt19937_64 rng(magwkb_seed(102));
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_series1(rng, 8), b = random_series1(rng, 8);
        a.at(0) = 0;
        b.at(0) = 0;
        CHECK(distance(exp(a + b), exp(a) * exp(b)) < 1e-12);
    }
}

TEST_CASE("two-variable series: randomized identities") {
    std::mt19937_64 rng(magwkb_seed(103));
    std::uniform_int_distribution<int> ord(0, 7);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = ord(rng);
        const auto a = random_series2(rng, n), b = random_series2(rng, n);
        CHECK(distance(a * b, b * a) < 1e-13);
        CHECK(distance((a * b).partial_first(), a.partial_first() * b + a * b.partial_first()) < 1e-11);
        CHECK(distance(realify(complexify(a)), a) < 1e-12);
        // a polynomial of degree <= order: substitution and evaluation commute exactly
        const std::array<std::array<cplx, 2>, 2> m{{{u(rng), u(rng)}, {u(rng), u(rng)}}};
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        const cplx direct = a.evaluate(m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y);
        CHECK(std::abs(linear_substitute(a, m).evaluate(x, y) - direct) < 1e-12);
    }
}

TEST_CASE("complexify maps real Taylor data to real functions") {
    std::mt19937_64 rng(magwkb_seed(104));
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 100; ++trial) {
        TruncatedSeries2 q(6);
        for (int i = 0; i <= 6; ++i)
            for (int j = 0; i + j <= 6; ++j) q.at(i, j) = u(rng);
        const auto zw = complexify(q);
        CHECK(zw.is_real_function(1e-13));
        // value at (q1,q2) equals value at z = q1 + i q2, w = conj(z)
        const double q1 = u(rng) * 0.5, q2 = u(rng) * 0.5;
        const cplx z(q1, q2);
        CHECK(std::abs(zw.evaluate(z, std::conj(z)) - q.evaluate(q1, q2)) < 1e-13);
    }
}

TEST_CASE("curve substitution and variable shift agree") {
    std::mt19937_64 rng(magwkb_seed(105));
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_series2(rng, 6);
        auto w = random_series1(rng, 6);
        w.at(0) = 0;
        // S(z, w(z)) is the y = 0 column of S(z, y + w(z))
        CHECK(distance(substitute_curve(s, w), shift_variable(s, w).column(0)) < 1e-11);
    }
}

TEST_CASE("coefficient access outside the stored range") {
    TruncatedSeries2 s(3);
    CHECK(s(5, 0) == cplx{});
    CHECK_THROWS(s.at(2, 2));
    TruncatedSeries1 t(2);
    CHECK(t[7] == cplx{});
}
