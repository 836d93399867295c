#include "magwkb/laguerre.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace magwkb {

RationalPolynomial laguerre_polynomial(int n, int alpha) {
    if (n < 0 || alpha < 0) throw std::invalid_argument("laguerre_polynomial: n and alpha must be nonnegative");
    RationalPolynomial prev{Rational(1)};
    if (n == 0) return prev;
    RationalPolynomial cur{Rational(1 + alpha), Rational(-1)};
    for (int k = 1; k < n; ++k) {
        // (k+1) L_{k+1} = (2k + 1 + alpha - s) L_k - (k + alpha) L_{k-1}
        RationalPolynomial next(k + 2, Rational(0));
        for (int i = 0; i <= k; ++i) {
            next[i] += Rational(2 * k + 1 + alpha) * cur[i];
            next[i + 1] -= cur[i];
        }
        for (int i = 0; i < static_cast<int>(prev.size()); ++i) next[i] -= Rational(k + alpha) * prev[i];
        for (auto& c : next) c /= Rational(k + 1);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

RationalPolynomial apply_laguerre_operator(const RationalPolynomial& p, int m) {
    const int am = std::abs(m);
    const int n = static_cast<int>(p.size());
    RationalPolynomial out(n, Rational(0));
    for (int k = 0; k < n; ++k) {
        out[k] += Rational(am - m + 1) * p[k];
        if (k >= 1) {
            // (2s - 2 - 2|m|) k c_k s^{k-1}
            out[k] += Rational(2 * k) * p[k];
            out[k - 1] -= Rational((2 + 2 * am) * k) * p[k];
        }
        if (k >= 2) out[k - 1] -= Rational(2 * k * (k - 1)) * p[k];  // -2 s k(k-1) c_k s^{k-2}
    }
    return out;
}

int laguerre_eigenvalue(int n, int m) { return 2 * n + 1 + std::abs(m) - m; }

double evaluate(const RationalPolynomial& p, double x) {
    double acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + static_cast<double>(*it);
    return acc;
}

namespace {

// L_n^(alpha)(x) and L_{n-1}^(alpha)(x) by the numerically stable recurrence.
std::pair<double, double> laguerre_values(int n, double alpha, double x) {
    double p0 = 1, p1 = 1 + alpha - x;
    if (n == 0) return {p0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    return {p1, p0};
}

}  // namespace

GaussRule gauss_laguerre(int count, double alpha) {
    if (count < 1) throw std::invalid_argument("gauss_laguerre: count must be >= 1");
    if (!(alpha > -1)) throw std::invalid_argument("gauss_laguerre: alpha > -1 required");
    // Jacobi matrix of the monic Laguerre recurrence.
    std::vector<double> d(count), e(std::max(1, count - 1));
    for (int k = 0; k < count; ++k) d[k] = 2 * k + 1 + alpha;
    for (int k = 1; k < count; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
    if (LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', count, d.data(), e.data(), nullptr, 1) != 0)
        throw std::runtime_error("gauss_laguerre: tridiagonal eigensolver failed");
    GaussRule rule;
    const double log_scale = std::lgamma(count + alpha + 1) - std::lgamma(count + 1.0);
    for (double x : d) {
        // Newton polish on L_n using L_n' = (n L_n - (n + alpha) L_{n-1}) / x.
        for (int it = 0; it < 4; ++it) {
            const auto [ln, lnm1] = laguerre_values(count, alpha, x);
            const double dl = (count * ln - (count + alpha) * lnm1) / x;
            x -= ln / dl;
        }
        const double l_next = laguerre_values(count + 1, alpha, x).first;
        rule.nodes.push_back(x);
        rule.weights.push_back(std::exp(log_scale) * x / ((count + 1.0) * (count + 1.0) * l_next * l_next));
    }
    return rule;
}

LaguerreSuiteResult laguerre_suite(int n_max, int m_min, int m_max) {
    if (n_max < 0 || n_max > 12) throw std::invalid_argument("laguerre_suite: 0 <= n_max <= 12 required");
    LaguerreSuiteResult r;
    for (int m = m_min; m <= m_max; ++m) {
        const int alpha = std::abs(m);
        const GaussRule rule = gauss_laguerre(16, alpha);
        std::vector<RationalPolynomial> polys;
        for (int n = 0; n <= n_max; ++n) {
            const RationalPolynomial L = laguerre_polynomial(n, alpha);
            const RationalPolynomial TL = apply_laguerre_operator(L, m);
            const Rational lam(laguerre_eigenvalue(n, m));
            Rational worst(0), scale(0);
            for (std::size_t k = 0; k < L.size(); ++k) {
                worst = std::max(worst, Rational(abs(TL[k] - lam * L[k])));
                scale = std::max(scale, Rational(abs(L[k])));
            }
            r.max_identity_residual = std::max(r.max_identity_residual, static_cast<double>(worst / scale));
            polys.push_back(L);
            ++r.cases;
        }
        std::vector<std::vector<double>> vals(polys.size());
        for (std::size_t n = 0; n < polys.size(); ++n)
            for (double x : rule.nodes) vals[n].push_back(evaluate(polys[n], x));
        auto inner = [&](std::size_t a, std::size_t b) {
            double s = 0;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * vals[a][i] * vals[b][i];
            return s;
        };
        for (std::size_t n = 0; n < polys.size(); ++n) {
            const double expected = std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0));
            const double nn = inner(n, n);
            r.max_norm_error = std::max(r.max_norm_error, std::abs(nn - expected) / expected);
            for (std::size_t k = 0; k < n; ++k)
                r.max_orthogonality_defect =
                    std::max(r.max_orthogonality_defect, std::abs(inner(k, n)) / std::sqrt(nn * inner(k, k)));
        }
    }
    return r;
}

}  // namespace magwkb
