#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "magwkb/chebyshev.hpp"
#include "magwkb/series.hpp"

namespace magwkb {

// Radial magnetic profile beta(rho), rho = |q|^2/2, either a polynomial
// (enables the exact series mode) or an evaluable function.
class RadialField {
public:
    static RadialField polynomial(std::vector<double> coeffs);
    static RadialField from_function(std::function<double(double)> beta, std::function<double(double)> beta_prime);

    bool is_polynomial() const { return !poly_.empty(); }
    bool is_constant() const;
    const std::vector<double>& coefficients() const { return poly_; }
    double beta0() const { return beta(0.0); }
    double beta_prime0() const { return beta_prime(0.0); }

    double beta(double rho) const;
    double beta_prime(double rho) const;
    // a(rho) = int_0^rho beta.
    double flux(double rho) const;
    // phi(rho) = 1/2 int_0^rho a(t)/t dt, the positive eikonal phase.
    double phase(double rho) const;
    // Smallest rho with phase(rho) = target (bisection).
    double phase_inverse(double target) const;

    // Throws unless beta(0) > 0, and either beta is constant or beta'(0) > 0
    // and beta(rho) > beta(0) on (0, rho_check].
    void validate(double rho_check) const;

private:
    std::vector<double> poly_;
    std::function<double(double)> fn_, dfn_;
};

// A smooth function of rho in one of the two representations.
class RadialFunction {
public:
    RadialFunction() = default;
    explicit RadialFunction(TruncatedSeries1 s) : rep_(std::move(s)) {}
    explicit RadialFunction(ChebyshevSeries c) : rep_(std::move(c)) {}

    bool is_series() const { return std::holds_alternative<TruncatedSeries1>(rep_); }
    const TruncatedSeries1& series() const { return std::get<TruncatedSeries1>(rep_); }
    const ChebyshevSeries& grid() const { return std::get<ChebyshevSeries>(rep_); }
    double operator()(double rho) const;
    double derivative_at(double rho) const;

private:
    std::variant<TruncatedSeries1, ChebyshevSeries> rep_;
};

enum class RadialMode { series, grid };

struct RadialChainOptions {
    RadialMode mode = RadialMode::grid;
    int series_order = 0;   // series mode: truncation order (0 = automatic)
    double cutoff_K = 0;    // 0 = default_cutoff_K(field)
    double rho_max = 0;     // grid mode window (0 = default_rho_max(K))
    int cheb_degree = 0;    // grid mode (0 = automatic)
};

struct RadialWkbExpansion {
    RadialMode mode = RadialMode::grid;
    RadialFunction phi;
    std::vector<RadialFunction> amplitudes;  // a_{m,0}..a_{m,J}
    std::vector<double> mu;                  // mu_{m,0}..mu_{m,J+1}
    int m = 0;
    double cutoff_K = 0;
    double rho_max = 0;

    int J() const { return static_cast<int>(amplitudes.size()) - 1; }
};

// Smooth cutoff equal to 1 on [0,K] and 0 on [K+1, inf).
double cutoff_chi(double rho, double K);
double default_cutoff_K(const RadialField& field);
double default_rho_max(double cutoff_K);

RadialFunction eikonal_phi(const RadialField& field, const RadialChainOptions& opts = {});
RadialWkbExpansion transport_chain(const RadialField& field, int m, int J, const RadialChainOptions& opts = {});

// Fiber quasimode chi(rho) rho^{m/2} e^{-phi/h} sum_j a_j h^j, returned as
// value = prefactor * exp(-exponent) so that callers can apply exponential
// weights without overflow.
struct FiberSamples {
    std::vector<double> prefactor;
    std::vector<double> exponent;  // phi(rho)/h
    std::vector<double> values() const;
};

enum class AnsatzMode { fiber, plane };

FiberSamples assemble_fiber_ansatz(const RadialWkbExpansion& e, double h, const std::vector<double>& rho);
// Plane mode: e^{i m theta} (|q|^2/2)^{m/2} e^{-phi/h} chi sum_j a_j h^j on the
// tensor grid xs x ys, row-major with x fastest.
std::vector<cplx> assemble_plane_ansatz(const RadialWkbExpansion& e, double h, const std::vector<double>& xs,
                                        const std::vector<double>& ys);

}  // namespace magwkb
