#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace magwkb {

using Rational = boost::multiprecision::cpp_rational;
// Exact polynomial, ascending coefficients.
using RationalPolynomial = std::vector<Rational>;

// Generalized Laguerre polynomial L_n^(alpha), integer alpha >= 0, from the
// three-term recurrence in exact arithmetic.
RationalPolynomial laguerre_polynomial(int n, int alpha);

// T_m p = -2 s p'' + (2s - 2 - 2|m|) p' + (|m| - m + 1) p.
RationalPolynomial apply_laguerre_operator(const RationalPolynomial& p, int m);

// Eigenvalue 2n + 1 + |m| - m of T_m on L_n^(|m|).
int laguerre_eigenvalue(int n, int m);

double evaluate(const RationalPolynomial& p, double x);

// Gauss rule for int_0^inf f(s) s^alpha e^{-s} ds (Golub-Welsch nodes, Newton
// polished; weights from the closed form), exact for degree <= 2 count - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_laguerre(int count, double alpha);

struct LaguerreSuiteResult {
    double max_identity_residual = 0;  // exact arithmetic; normalized by max |coefficient|
    double max_norm_error = 0;         // relative error of int L_n^2 s^|m| e^-s vs Gamma(n+|m|+1)/n!
    double max_orthogonality_defect = 0;  // |<L_k, L_n>| / sqrt(<L_k,L_k><L_n,L_n>), k != n
    int cases = 0;
};
LaguerreSuiteResult laguerre_suite(int n_max, int m_min, int m_max);

}  // namespace magwkb
