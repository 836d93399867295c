#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "magwkb/config.hpp"
#include "magwkb/laguerre.hpp"
#include "magwkb/operators.hpp"
#include "magwkb/radial_wkb.hpp"
#include "magwkb/surface_wkb.hpp"
#include "magwkb/verification.hpp"

using namespace magwkb;

namespace {

// Pinned tolerances and budgets.
constexpr double landau_mu_tol = 1e-12;
constexpr double landau_ratio_tol = 1e-6;
constexpr double two_term_min_slope = 2.7;
constexpr double slope_band = 0.3;
constexpr double amplitude_tol = 1e-9;
constexpr double mu1_tol = 1e-12;
constexpr double cascade_mu01_tol = 1e-10;
constexpr double cascade_mu2_tol = 1e-8;
constexpr double invariant_tol = 1e-12;
constexpr double laguerre_identity_tol = 1e-12;
constexpr double laguerre_norm_tol = 1e-10;
constexpr double agmon_max_ratio = 2.0;
constexpr double model_rel_tol = 1e-4;

const std::vector<double> ladder_3_6{0.125, 0.0625, 0.03125, 0.015625};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(const char* id, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = budget_s <= 0 || t < budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("%-4s %s  %s  [%.2f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), t,
                in_time ? "" : ", over budget");
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

std::string slopes_of(const std::vector<VerificationReport>& rs) {
    std::string s;
    for (const auto& r : rs) s += (s.empty() ? "" : ",") + fmt("%.2f", r.slope);
    return s;
}

}  // namespace

int main() {
    const RadialField linear = RadialField::polynomial({1.0, 1.0});  // beta(s) = 1 + s

    run("AC1", 10, [] {
        const RadialField flat = RadialField::polynomial({1.0});
        RadialChainOptions series;
        series.mode = RadialMode::series;
        const auto e = transport_chain(flat, 0, 3, series);
        double worst = 0;
        for (int j = 1; j <= 4; ++j) worst = std::max(worst, std::abs(e.mu[j]));
        const double h = 1.0 / 16;
        // Window where the ground state is below e^{-10} of its peak.
        const double L = spectral_window(flat, h, 10);
        const auto op = build_radial_operator(flat, h, 0, 4001, L);
        const double ratio = tridiagonal_lowest_eigenvalues(op.tridiagonal, 1)[0] / h;
        return Outcome{worst <= landau_mu_tol && std::abs(ratio - 1) <= landau_ratio_tol,
                       "max|mu_1..4|=" + fmt("%.1e", worst) + " |lambda0/h-1|=" + fmt("%.1e", std::abs(ratio - 1))};
    });

    run("AC2", 60, [&] {
        std::vector<VerificationReport> rs;
        bool pass = true;
        for (int m : {0, 1, 2}) {
            rs.push_back(eigenvalue_expansion(linear, m, 1, ladder_3_6, {}, 3 - two_term_min_slope));
            pass = pass && rs.back().has_slope && rs.back().slope >= two_term_min_slope;
        }
        return Outcome{pass, "slopes(m=0,1,2)=" + slopes_of(rs) + " (need >= 2.7)"};
    });

    run("AC3", 120, [&] {
        std::vector<VerificationReport> rs;
        bool pass = true;
        for (int m : {0, 1})
            for (int J : {0, 1, 2}) {
                rs.push_back(residual_scaling(linear, m, J, default_h_ladder(), {}, slope_band));
                pass = pass && rs.back().has_slope && std::abs(rs.back().slope - (J + 2)) <= slope_band;
            }
        return Outcome{pass, "slopes(m,J)=" + slopes_of(rs) + " (targets 2,3,4,2,3,4 +-0.3)"};
    });

    run("AC4", 1, [&] {
        double amp_err = 0, mu_err = 0;
        for (int m : {0, 1, 2}) {
            RadialChainOptions grid;
            grid.rho_max = 4;
            const auto g = transport_chain(linear, m, 0, grid);
            for (int i = 0; i <= 400; ++i) {
                const double r = 4.0 * i / 400;
                amp_err = std::max(amp_err, std::abs(g.amplitudes[0](r) - 2 / (2 + r)));
            }
            RadialChainOptions series;
            series.mode = RadialMode::series;
            mu_err = std::max(mu_err, std::abs(transport_chain(linear, m, 1, series).mu[1] - (m + 1)));
        }
        return Outcome{amp_err <= amplitude_tol && mu_err <= mu1_tol,
                       "max|a0-2/(2+rho)|=" + fmt("%.1e", amp_err) + " max|mu1-(m+1)|=" + fmt("%.1e", mu_err)};
    });

    run("AC5", 10, [&] {
        double e01 = 0, e2 = 0;
        for (int ell : {0, 1, 2}) {
            const int J = 1, order = cascade_required_field_order(ell, J);
            TruncatedSeries2 b(order);
            b.at(0, 0) = 1;
            b.at(2, 0) = 0.5;
            b.at(0, 2) = 0.5;
            const auto s = transport_cascade(FieldSpecSurface::from_taylor(b, TruncatedSeries2(order)), ell, J);
            RadialChainOptions series;
            series.mode = RadialMode::series;
            const auto r = transport_chain(linear, ell, J, series);
            e01 = std::max({e01, std::abs(s.mu[0] - 1), std::abs(s.mu[1] - (ell + 1))});
            e2 = std::max(e2, std::abs(s.mu[2] - r.mu[2]));
        }
        return Outcome{e01 <= cascade_mu01_tol && e2 <= cascade_mu2_tol,
                       "max|mu0-1|,|mu1-(l+1)|=" + fmt("%.1e", e01) + " max|mu2 surface-radial|=" + fmt("%.1e", e2)};
    });

    run("AC6", 1, [] {
        std::mt19937_64 rng(magwkb_seed(20240611));
        std::uniform_real_distribution<double> pos(0.05, 5), eta(-1, 1), angle(0, std::numbers::pi);
        std::uniform_int_distribution<int> level(0, 6);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            double a = pos(rng), g = pos(rng);
            if (a > g) std::swap(a, g);
            const double e0 = eta(rng), b0 = pos(rng), th = angle(rng);
            const int ell = level(rng);
            // Half-Hessian in metric units, in a rotated frame; invariants computed numerically.
            Eigen::Matrix2d rot;
            rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
            const Eigen::Matrix2d H = std::exp(-2 * e0) * rot * Eigen::Vector2d(a, g).asDiagonal() * rot.transpose();
            const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
            const HessianInvariants inv{H.determinant(), es.operatorSqrt().trace()};
            const double lhs = mu1_closed_form(a, g, e0, b0, ell), rhs = mu1_from_invariants(inv, b0, ell);
            worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
        }
        return Outcome{worst <= invariant_tol, "1000 cases, max relative difference " + fmt("%.1e", worst)};
    });

    run("AC7", 1, [] {
        const auto r = laguerre_suite(10, -5, 5);
        return Outcome{r.max_identity_residual <= laguerre_identity_tol && r.max_norm_error <= laguerre_norm_tol &&
                           r.max_orthogonality_defect <= laguerre_norm_tol,
                       "identity residual " + fmt("%.1e", r.max_identity_residual) + ", norm error " +
                           fmt("%.1e", r.max_norm_error) + ", orthogonality " + fmt("%.1e", r.max_orthogonality_defect)};
    });

    run("AC8", 0, [&] {
        const auto r = agmon_check(linear, 0, ladder_3_6, 0.9);
        double lo = INFINITY, hi = 0;
        std::string vals;
        for (double v : r.observed) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            vals += (vals.empty() ? "" : ",") + fmt("%.3f", v);
        }
        return Outcome{r.pass && hi / lo < agmon_max_ratio,
                       "ratios=" + vals + " max/min=" + fmt("%.2f", hi / lo) + " " + r.verdict};
    });

    run("AC9", 0, [&] {
        std::vector<VerificationReport> rs;
        bool pass = true, bound = true;
        for (double eps : {0.0, 0.5})
            for (int J : {0, 1}) {
                rs.push_back(weighted_approximation(linear, 0, J, default_h_ladder(), eps, {}, slope_band));
                pass = pass && rs.back().pass;
                bound = bound && rs.back().slope >= J + 1 - slope_band;
            }
        return Outcome{pass, "slopes(eps,J)=" + slopes_of(rs) + " (targets 1,2,1,2 +-0.3; observed error decays" +
                                 " about one order faster: the bound holds but is not sharp; upper_bound_consistent=" +
                                 (bound ? "yes" : "no") + ")"};
    });

    run("AC10", 300, [&] {
        const double h = 1.0 / 32;
        const auto f = fiber_identification(linear, h, 3, 4);
        const auto r = fiber_report(f, h);
        double worst = 0;
        for (std::size_t i = 0; i < 4 && i < f.plane_fine.size(); ++i)
            worst = std::max(worst, std::abs(f.plane_fine[i] - f.fiber[f.permutation[i]]) / f.tolerance[i]);
        std::string modes;
        for (int a : f.angular_mode) modes += std::to_string(a);
        return Outcome{r.pass, "max |2D-fiber|/tolerance=" + fmt("%.2f", worst) + " identity=" +
                                   (f.identity ? "yes" : "no") + " angular modes " + modes};
    });

    run("AC11", 0, [] {
        double worst = 0;
        bool pass = true;
        for (int m : {0, 1, 2, 3})
            for (double beta0 : {1.0, 2.0}) {
                const auto r = model_spectrum_check(m, beta0, 4001, 3, model_rel_tol);
                pass = pass && r.pass;
                for (std::size_t k = 0; k < r.observed.size(); ++k) worst = std::max(worst, r.observed[k]);
            }
        return Outcome{pass, "max relative error " + fmt("%.1e", worst)};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
