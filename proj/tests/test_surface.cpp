#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "magwkb/config.hpp"
#include "magwkb/normalize.hpp"
#include "magwkb/radial_wkb.hpp"
#include "magwkb/surface_wkb.hpp"

using namespace magwkb;

namespace {

// B(q) = beta(|q|^2 / 2) as Taylor data in (q1, q2).
TruncatedSeries2 radial_taylor(const std::vector<double>& beta, int order) {
    TruncatedSeries2 s(order);
    const auto q1 = TruncatedSeries2::first_variable(order), q2 = TruncatedSeries2::second_variable(order);
    const auto rho = (q1 * q1 + q2 * q2) * cplx(0.5);
    TruncatedSeries2 p = TruncatedSeries2::constant(1.0, order);
    for (double c : beta) {
        s += p * cplx(c);
        p = p * rho;
    }
    return s;
}

}  // namespace

TEST_CASE("harmonic field: first correction matches the closed form and the invariants") {
    for (double eta0 : {0.0, 0.3}) {
        for (int ell : {0, 1, 2}) {
            const int order = cascade_required_field_order(ell, 2);
            TruncatedSeries2 b(order), eta(order);
            b.at(0, 0) = 1.5;
            b.at(2, 0) = 0.7;
            b.at(0, 2) = 2.0;
            eta.at(0, 0) = eta0;
            const auto field = FieldSpecSurface::from_taylor(b, eta);
            const auto e = transport_cascade(field, ell, 2);
            CHECK(e.mu[0] == doctest::Approx(1.5).epsilon(1e-14));
            const double closed = mu1_closed_form(0.7, 2.0, eta0, 1.5, ell);
            CHECK(e.mu[1] == doctest::Approx(closed).epsilon(1e-12));
            const auto inv = hessian_invariants(0.7, 2.0, eta0);
            CHECK(mu1_from_invariants(inv, 1.5, ell) == doctest::Approx(closed).epsilon(1e-13));
            CHECK(eikonal_residual(e) < 1e-12);
            for (double r : transport_residuals(field, e)) CHECK(r < 1e-9);
        }
    }
}

TEST_CASE("radially symmetric field: surface cascade reproduces the radial chain") {
    // For B = beta(|q|^2/2) the level-ell surface quasimode and the m = ell
    // radial fiber quasimode describe the same eigenvalue branch.
    for (const auto& beta : {std::vector<double>{1, 0.5, 1}, std::vector<double>{2, 1, -0.3, 0.1}}) {
        for (int ell : {0, 1, 2}) {
            const int J = 3;
            const auto b = radial_taylor(beta, cascade_required_field_order(ell, J));
            const auto field = FieldSpecSurface::from_taylor(b, TruncatedSeries2(b.order()));
            const auto s = transport_cascade(field, ell, J);
            RadialChainOptions opts;
            opts.mode = RadialMode::series;
            const auto r = transport_chain(RadialField::polynomial(beta), ell, J, opts);
            for (int j = 0; j <= J + 1; ++j)
                CHECK(s.mu[j] == doctest::Approx(r.mu[j]).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("rotated fields give the same eigenvalue coefficients") {
    std::mt19937_64 rng(magwkb_seed(201));
    std::uniform_real_distribution<double> u(-0.5, 0.5), angle(0, 2 * std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        const int J = 2, order = cascade_required_field_order(0, J);
        TruncatedSeries2 b(order), eta(order);
        b.at(0, 0) = 1.0;
        b.at(2, 0) = 0.6;
        b.at(0, 2) = 1.4;
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; i + j <= 4; ++j)
                if (i + j >= 3) b.at(i, j) = u(rng);
        eta.at(0, 0) = 0.1;
        eta.at(1, 1) = u(rng);
        const auto base = transport_cascade(FieldSpecSurface::from_taylor(b, eta), 0, J);
        const double th = angle(rng);
        const std::array<std::array<cplx, 2>, 2> rot{{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}}};
        // q = R q': express the field in rotated coordinates, then normalize back
        const auto n = normalize_quadratic(linear_substitute(b, rot), linear_substitute(eta, rot));
        CHECK(n.field.alpha == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(n.field.gamma == doctest::Approx(1.4).epsilon(1e-12));
        CHECK(std::abs(n.rotation.determinant() - 1) < 1e-13);
        const auto rotated = transport_cascade(n.field, 0, J);
        for (int j = 0; j <= J + 1; ++j) CHECK(rotated.mu[j] == doctest::Approx(base.mu[j]).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("normal form requirements are enforced") {
    TruncatedSeries2 b(4), eta(4);
    b.at(0, 0) = 1;
    b.at(2, 0) = 2;
    b.at(0, 2) = 1;  // alpha > gamma
    CHECK_THROWS(FieldSpecSurface::from_taylor(b, eta));
    b.at(2, 0) = 1;
    b.at(0, 2) = 2;
    CHECK_NOTHROW(FieldSpecSurface::from_taylor(b, eta));
    b.at(1, 0) = 0.5;  // not a critical point
    CHECK_THROWS(FieldSpecSurface::from_taylor(b, eta));
}

TEST_CASE("normalize_quadratic diagonalizes the quadratic part") {
    TruncatedSeries2 b(3), eta(3);
    b.at(0, 0) = 1;
    b.at(2, 0) = 2;
    b.at(1, 1) = 2;
    b.at(0, 2) = 2;
    const auto n = normalize_quadratic(b, eta);
    CHECK(n.field.alpha == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(n.field.gamma == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(n.field.b_taylor(1, 1) == cplx{});
    b.at(0, 2) = -2;
    CHECK_THROWS(normalize_quadratic(b, eta));
}

TEST_CASE("the working order grows with level and depth") {
    CHECK(cascade_working_order(0, 0) < cascade_working_order(0, 2));
    CHECK(cascade_working_order(0, 2) < cascade_working_order(3, 2));
    CHECK(cascade_required_field_order(1, 2) >= cascade_working_order(1, 2));
}
