#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "magwkb/series.hpp"

namespace magwkb {

// Magnetic field and conformal exponent as Taylor data in real coordinates
// (q1,q2) centred at a nondegenerate field minimum in quadratic normal form:
// B = b0 + alpha q1^2 + gamma q2^2 + (cubic and higher), 0 < alpha <= gamma.
struct FieldSpecSurface {
    TruncatedSeries2 b_taylor;
    TruncatedSeries2 eta_taylor;
    double b0 = 0;
    double alpha = 0;
    double gamma = 0;

    // Reads b0, alpha, gamma from the Taylor data and validates the normal form.
    static FieldSpecSurface from_taylor(TruncatedSeries2 b, TruncatedSeries2 eta);
    void validate() const;
    int order() const { return std::min(b_taylor.order(), eta_taylor.order()); }
    double eta0() const { return eta_taylor(0, 0).real(); }
};

struct SurfaceWkbExpansion {
    TruncatedSeries2 psi;                     // Poisson normal form, in (z,w)
    TruncatedSeries1 w_curve;                 // w(z)
    TruncatedSeries1 f_phase;                 // f(z)
    TruncatedSeries2 s_phase;                 // psi + f(z)
    std::vector<TruncatedSeries2> amplitudes;  // A^(0)..A^(J), in (z,w)
    std::vector<TruncatedSeries2> amplitudes_shifted;  // same, in (z, y = w - w(z))
    std::vector<double> mu;                   // mu_0..mu_{J+1}
    int level = 0;
    int working_order = 0;
};

// Poisson normal form: 4 d_z d_w psi = complexify(e^{2 eta} B), no pure z^m or
// w^n monomials, vanishing constant and linear parts.
TruncatedSeries2 poisson_normal_form(const FieldSpecSurface& field);

// Curve w(z) with w(0)=0 and B~(z, w(z)) = b0 through the attainable order.
TruncatedSeries1 solve_curve_w(const FieldSpecSurface& field);

// f(z) with f(0)=0 and f'(z) = -2 (d_z psi)(z, w(z)).
TruncatedSeries1 solve_phase_f(const TruncatedSeries2& psi, const TruncatedSeries1& w_curve);

struct FormalOdeResult {
    TruncatedSeries2 solution;
    TruncatedSeries1 solvability_defect;
};

// Formal solution of V(s,t) d_t u + F(s,t) u = G(s,t) in powers of t, with
// V = v1 t + ..., v1 a nonzero constant, F = -level*v1 + ... Columns
// u_m(s), m != level, follow from the recursion; u_level is the seed (a
// polynomial, missing coefficients are zero). Without G the problem is
// homogeneous and F(s,0) = -level*v1 is enforced.
FormalOdeResult formal_ode_solve(const TruncatedSeries2& V, const TruncatedSeries2& F,
                                 const std::optional<TruncatedSeries2>& G, int level,
                                 const TruncatedSeries1& seed);

// Series order used internally by transport_cascade and the Taylor order the
// field data must provide.
int cascade_working_order(int level, int J);
int cascade_required_field_order(int level, int J);

SurfaceWkbExpansion transport_cascade(const FieldSpecSurface& field, int level, int J);

struct HessianInvariants {
    double det;         // det H
    double trace_sqrt;  // Tr H^{1/2}
};

HessianInvariants hessian_invariants(double alpha, double gamma, double eta0);
double mu1_closed_form(double alpha, double gamma, double eta0, double b0, int level);
double mu1_from_invariants(const HessianInvariants& inv, double b0, int level);

// Diagnostics: maximal coefficient of the eikonal defect, and of each transport
// equation's residual (index j for the equation determining A^(j)).
double eikonal_residual(const SurfaceWkbExpansion& e);
std::vector<double> transport_residuals(const FieldSpecSurface& field, const SurfaceWkbExpansion& e);

}  // namespace magwkb
