#include <doctest.h>

#include <cmath>
#include <random>

#include "magwkb/config.hpp"
#include "magwkb/radial_wkb.hpp"

using namespace magwkb;

TEST_CASE("phase of a linear profile has a closed form") {
    // beta = 1 + 2 rho: a = rho + rho^2, phi = 1/2 int (1 + t) = rho/2 + rho^2/4
    const auto f = RadialField::polynomial({1, 2});
    for (double r : {0.0, 0.1, 0.7, 2.0}) {
        CHECK(f.flux(r) == doctest::Approx(r + r * r).epsilon(1e-14));
        CHECK(f.phase(r) == doctest::Approx(r / 2 + r * r / 4).epsilon(1e-12));
    }
    CHECK(f.phase_inverse(f.phase(1.3)) == doctest::Approx(1.3).epsilon(1e-10));
    for (auto mode : {RadialMode::series, RadialMode::grid}) {
        RadialChainOptions o;
        o.mode = mode;
        const auto phi = eikonal_phi(f, o);
        for (double r : {0.05, 0.3, 0.9}) CHECK(phi(r) == doctest::Approx(r / 2 + r * r / 4).epsilon(1e-10));
    }
}

TEST_CASE("constant field: the ground energy is exactly h beta0") {
    for (int m : {0, 1, 3}) {
        for (auto mode : {RadialMode::series, RadialMode::grid}) {
            RadialChainOptions o;
            o.mode = mode;
            const auto e = transport_chain(RadialField::polynomial({1.7}), m, 3, o);
            CHECK(e.mu[0] == doctest::Approx(1.7).epsilon(1e-14));
            for (std::size_t j = 1; j < e.mu.size(); ++j) CHECK(std::abs(e.mu[j]) < 1e-12);
        }
    }
}

TEST_CASE("first correction of the radial chain") {
    // mu_1 = (m + 1) beta'(0) / beta0 follows from linearizing the transport equation.
    for (const auto& beta : {std::vector<double>{1, 2}, std::vector<double>{2, 0.5, 1}, std::vector<double>{0.5, 1, 0.2}}) {
        for (int m : {0, 1, 2}) {
            const auto e = transport_chain(RadialField::polynomial(beta), m, 1);
            CHECK(e.mu[1] == doctest::Approx((m + 1) * beta[1] / beta[0]).epsilon(1e-9));
        }
    }
}

TEST_CASE("grid and series constructions agree") {
    std::mt19937_64 rng(magwkb_seed(301));
    std::uniform_real_distribution<double> u(0.2, 1.5), v(-0.1, 0.5);
    for (int trial = 0; trial < 8; ++trial) {
        const std::vector<double> beta{u(rng), u(rng), v(rng)};
        const auto field = RadialField::polynomial(beta);
        const int m = trial % 3;
        RadialChainOptions s, g;
        s.mode = RadialMode::series;
        g.mode = RadialMode::grid;
        const auto es = transport_chain(field, m, 3, s), eg = transport_chain(field, m, 3, g);
        for (int j = 0; j <= 3; ++j) CHECK(eg.mu[j] == doctest::Approx(es.mu[j]).epsilon(1e-8).scale(1.0));
        for (double r : {0.02, 0.05, 0.1})
            for (int j = 0; j <= 2; ++j)
                CHECK(eg.amplitudes[j](r) == doctest::Approx(es.amplitudes[j](r)).epsilon(1e-7).scale(1.0));
    }
}

TEST_CASE("cutoff is smooth and supported where stated") {
    const double K = 2;
    CHECK(cutoff_chi(0.0, K) == 1.0);
    CHECK(cutoff_chi(K, K) == 1.0);
    CHECK(cutoff_chi(K + 1, K) == 0.0);
    CHECK(cutoff_chi(K + 5, K) == 0.0);
    double prev = 1;
    for (int i = 0; i <= 100; ++i) {
        const double c = cutoff_chi(K + i / 100.0, K);
        CHECK(c <= prev + 1e-15);
        CHECK(c >= 0);
        prev = c;
    }
}

TEST_CASE("field validation") {
    CHECK_NOTHROW(RadialField::polynomial({1, 1}).validate(3));
    CHECK_NOTHROW(RadialField::polynomial({2}).validate(3));
    CHECK_THROWS(RadialField::polynomial({-1, 1}).validate(1));
    CHECK_THROWS(RadialField::polynomial({1, -1}).validate(1));
}

TEST_CASE("fiber ansatz samples") {
    const auto e = transport_chain(RadialField::polynomial({1, 1}), 1, 2);
    const std::vector<double> rho{0.0, 0.1, 0.5};
    const auto s = assemble_fiber_ansatz(e, 0.1, rho);
    const auto v = s.values();
    CHECK(v[0] == 0.0);  // rho^{m/2} vanishes at the origin
    CHECK(s.exponent[2] == doctest::Approx(e.phi(0.5) / 0.1).epsilon(1e-12));
    CHECK(v[1] > 0);
}
