#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "magwkb/config.hpp"
#include "magwkb/laguerre.hpp"
#include "magwkb/operators.hpp"
#include "magwkb/tridiagonal.hpp"
#include "magwkb/verification.hpp"

using namespace magwkb;

namespace {

SymmetricTridiagonal second_difference(int n) {
    SymmetricTridiagonal t;
    t.diagonal.assign(n, 2.0);
    t.off_diagonal.assign(n - 1, -1.0);
    return t;
}

double symmetric_residual(const SymmetricTridiagonal& t, const std::vector<double>& x, double lambda) {
    const auto y = t.apply(x);
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) r = std::max(r, std::abs(y[i] - lambda * x[i]));
    return r;
}

}  // namespace

TEST_CASE("tridiagonal eigenvalues of the second difference matrix") {
    const int n = 200;
    const auto t = second_difference(n);
    const auto ev = tridiagonal_lowest_eigenvalues(t, 5);
    for (int k = 1; k <= 5; ++k)
        CHECK(ev[k - 1] == doctest::Approx(2 - 2 * std::cos(k * std::numbers::pi / (n + 1))).epsilon(1e-12));
    for (int k = 0; k < 5; ++k) {
        const auto v = tridiagonal_eigenvector(t, ev[k]);
        CHECK(symmetric_residual(t, v, ev[k]) < 1e-12);
        // against sin(j k pi / (n+1)), normalized, largest entry positive
        double norm = 0;
        std::vector<double> s(n);
        for (int j = 0; j < n; ++j) norm += std::pow(s[j] = std::sin((j + 1) * (k + 1) * std::numbers::pi / (n + 1)), 2);
        int big = 0;
        for (int j = 0; j < n; ++j)
            if (std::abs(s[j]) > std::abs(s[big])) big = j;
        const double sign = s[big] > 0 ? 1 : -1;
        double err = 0;
        for (int j = 0; j < n; ++j) err = std::max(err, std::abs(v[j] - sign * s[j] / std::sqrt(norm)));
        CHECK(err < 1e-10);
    }
}

TEST_CASE("random symmetric tridiagonal matrices against a dense solve") {
    std::mt19937_64 rng(magwkb_seed(401));
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 30;
        SymmetricTridiagonal t;
        for (int i = 0; i < n; ++i) t.diagonal.push_back(u(rng) * 3);
        for (int i = 0; i + 1 < n; ++i) t.off_diagonal.push_back(u(rng));
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = t.diagonal[i];
        for (int i = 0; i + 1 < n; ++i) d(i, i + 1) = d(i + 1, i) = t.off_diagonal[i];
        const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d).eigenvalues();
        const auto ev = tridiagonal_lowest_eigenvalues(t, 4);
        for (int k = 0; k < 4; ++k) {
            CHECK(ev[k] == doctest::Approx(ref[k]).epsilon(1e-12).scale(1.0));
            CHECK(symmetric_residual(t, tridiagonal_eigenvector(t, ev[k]), ev[k]) < 1e-10);
        }
    }
}

TEST_CASE("model operator reproduces the Landau levels") {
    for (int m : {0, 1, 2}) {
        for (double beta0 : {1.0, 2.5}) {
            const auto op = build_model_operator(m, beta0, 6000);
            const auto ev = tridiagonal_lowest_eigenvalues(op.tridiagonal, 3);
            for (int k = 0; k < 3; ++k) CHECK(ev[k] == doctest::Approx((2 * k + 1) * beta0).epsilon(1e-4));
        }
    }
}

TEST_CASE("radial operator and its rescaled form are unitarily equivalent") {
    const auto field = RadialField::polynomial({1, 0.5, 1});
    for (double h : {0.125, 0.03125}) {
        for (int m : {0, 2}) {
            const double L = spectral_window(field, h, 30);
            const auto a = build_radial_operator(field, h, m, 3000, L);
            const auto b = build_rescaled_operator(field, h, m, 3000, L / h);
            const auto ea = tridiagonal_lowest_eigenvalues(a.tridiagonal, 3);
            const auto eb = tridiagonal_lowest_eigenvalues(b.tridiagonal, 3);
            for (int k = 0; k < 3; ++k) CHECK(ea[k] == doctest::Approx(h * eb[k]).epsilon(1e-11));
        }
    }
}

TEST_CASE("constant field on the half line: ground energy h beta0") {
    const auto field = RadialField::polynomial({1.3});
    const double h = 0.0625;
    const auto ev = radial_eigenvalues(field, h, 1, 2, 4000, spectral_window(field, h, 40));
    CHECK(ev.extrapolated[0] == doctest::Approx(1.3 * h).epsilon(1e-7));
    CHECK(ev.extrapolated[1] == doctest::Approx(3 * 1.3 * h).epsilon(1e-6));
}

TEST_CASE("plane operator: Hermitian, gauge-consistent, and solver paths agree") {
    const auto field = PlaneField::from_radial(RadialField::polynomial({1, 0.5}));
    const auto op = build_2d_operator(field, 0.1, 31);
    CHECK(op.hermiticity_defect() < 1e-14);
    const auto dense = eigen_solve(op, 4, true);
    const auto iter = eigen_solve(op, 4, false);
    for (int k = 0; k < 4; ++k) {
        CHECK(iter[k].value == doctest::Approx(dense[k].value).epsilon(1e-9));
        CHECK(dense[k].value >= op.spectral_floor);
        double norm = 0;
        for (int i = 0; i < op.size(); ++i) norm += op.weights[i] * std::norm(iter[k].vector[i]);
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("plane operator with a uniform field sits at the lowest Landau level") {
    const auto field = PlaneField::from_radial(RadialField::polynomial({1.0}));
    const double h = 0.05;
    // The level is (nearly) degenerate, which defeats subspace iteration; solve densely.
    const auto ev = eigen_solve(build_2d_operator(field, h, 41), 3, true);
    for (const auto& p : ev) CHECK(p.value == doctest::Approx(h).epsilon(2e-2));
}

TEST_CASE("generalized Laguerre polynomials") {
    const auto l21 = laguerre_polynomial(2, 1);  // (x^2 - 6x + 6) / 2 shifted: 3 - 3x + x^2/2
    REQUIRE(l21.size() == 3);
    CHECK(l21[0] == Rational(3));
    CHECK(l21[1] == Rational(-3));
    CHECK(l21[2] == Rational(1, 2));
    for (int m = -3; m <= 3; ++m)
        for (int n = 0; n <= 8; ++n) {
            const auto p = laguerre_polynomial(n, std::abs(m));
            const auto tp = apply_laguerre_operator(p, m);
            REQUIRE(tp.size() == p.size());
            for (std::size_t i = 0; i < p.size(); ++i) CHECK(tp[i] == p[i] * laguerre_eigenvalue(n, m));
        }
    const auto rule = gauss_laguerre(12, 0);
    double fact = 1;
    for (int k = 0; k <= 20; ++k) {
        if (k) fact *= k;
        double s = 0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
        CHECK(s == doctest::Approx(fact).epsilon(1e-11));
    }
    const auto r = laguerre_suite(10, -5, 5);
    CHECK(r.max_identity_residual == 0);
    CHECK(r.max_norm_error < 1e-10);
    CHECK(r.max_orthogonality_defect < 1e-10);
    CHECK(laguerre_report(r).pass);
}

TEST_CASE("log-log fit recovers an exact power law") {
    const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
    std::vector<double> v;
    for (double x : h) v.push_back(3 * std::pow(x, 2.5));
    const auto fit = fit_log_log(h, v);
    CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3).epsilon(1e-12));
    CHECK(fit.rms_residual < 1e-12);
}

TEST_CASE("model spectrum check") {
    const auto r = model_spectrum_check(1, 1.0, 4000);
    CHECK(r.pass);
}
