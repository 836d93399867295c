#pragma once

#include <Eigen/Sparse>

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "magwkb/radial_wkb.hpp"
#include "magwkb/surface_wkb.hpp"
#include "magwkb/tridiagonal.hpp"

namespace magwkb {

enum class OperatorKind { radial_fiber, rescaled_fiber, model, plane };

// Discretized self-adjoint operator in symmetric form. With grid weights w_i
// (the quadrature of the L2 measure) a function with samples psi_i is
// represented by x_i = sqrt(w_i) psi_i, on which the matrix acts.
struct OperatorMatrix {
    OperatorKind kind = OperatorKind::radial_fiber;
    std::string descriptor;
    double h = 0;
    int m = 0;
    std::vector<double> nodes;    // 1D nodes (rho or t); empty for the plane
    std::vector<double> weights;  // quadrature weights, one per unknown
    SymmetricTridiagonal tridiagonal;            // 1D operators
    Eigen::SparseMatrix<std::complex<double>> sparse;  // plane operator
    std::vector<double> xs, ys;   // plane axes (unknown index = ix + nx * iy)
    double spectral_floor = 0;    // a number at or below the lowest eigenvalue (plane)

    bool is_tridiagonal() const { return kind != OperatorKind::plane; }
    int size() const { return static_cast<int>(weights.size()); }
    double norm_inf() const;
    // Op psi on samples (weights handled internally).
    std::vector<double> apply(const std::vector<double>& psi) const;
    std::vector<std::complex<double>> apply(const std::vector<std::complex<double>>& psi) const;
    // Largest |A_ij - conj(A_ji)| relative to norm_inf().
    double hermiticity_defect() const;
};

struct EigenPair {
    double value = 0;
    std::vector<std::complex<double>> vector;  // samples, normalized: sum w |psi|^2 = 1
    std::vector<double> real_vector() const;
};

// Rho where the eikonal phase reaches depth * h: beyond it a ground state is
// below e^{-depth} of its peak.
double spectral_window(const RadialField& field, double h, double depth);

// N_{h,m} = -2h^2 d/drho rho d/drho + (hm - a(rho))^2/(2 rho) on L2(drho), in the
// form conjugated by rho^{m/2}; staggered nodes (i+1/2) drho, Dirichlet at rho_max.
OperatorMatrix build_radial_operator(const RadialField& field, double h, int m, int n_grid, double rho_max);
// The same operator after rho = h t, divided by h: eigenvalues are those of N_{h,m} / h.
OperatorMatrix build_rescaled_operator(const RadialField& field, double h, int m, int n_grid, double t_max);
// -2 d/dt t d/dt + beta0^2 t/2 + m^2/(2t) - m beta0; t_max = 0 picks 60 / beta0.
OperatorMatrix build_model_operator(int m, double beta0, int n_grid, double t_max = 0);

// Magnetic field and conformal exponent on the plane.
struct PlaneField {
    std::function<double(double, double)> B;
    std::function<double(double, double)> eta;  // empty = 0
    std::string descriptor;

    static PlaneField from_radial(const RadialField& field);
    static PlaneField from_surface(const FieldSpecSurface& field);
};

struct PlaneBox {
    double lo = -1.6;
    double hi = 1.6;
};

// e^{-2 eta} [(-ih d1 - A1)^2 + (-ih d2 - A2)^2] with A = alpha(q) (-q2, q1),
// alpha(q) = int_0^1 t B(tq) dt, by gauge-covariant (Peierls) differences on
// n_grid x n_grid interior nodes; Dirichlet on the box boundary.
OperatorMatrix build_2d_operator(const PlaneField& field, double h, int n_grid, const PlaneBox& box = {});

// The k lowest eigenpairs, nondecreasing. The plane operator is solved by
// shift-invert subspace iteration; dense = true forces a dense solve instead.
std::vector<EigenPair> eigen_solve(const OperatorMatrix& op, int k, bool dense = false);

// Fraction of |psi|^2 mass in the outer frame (width = 5% of the box) of a
// plane eigenvector.
double boundary_mass_fraction(const OperatorMatrix& op, const EigenPair& pair);

}  // namespace magwkb
