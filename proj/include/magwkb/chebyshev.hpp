#pragma once

#include <functional>
#include <vector>

namespace magwkb {

// Chebyshev expansion sum_k c_k T_k(2x/L - 1) of a smooth function on [0, L].
// Coefficients and arithmetic are kept in extended precision: the transport
// chain differentiates these expansions repeatedly, which amplifies rounding.
class ChebyshevSeries {
public:
    using real = long double;

    ChebyshevSeries() = default;
    ChebyshevSeries(std::vector<real> coeffs, double length);

    // Interpolates f at the n+1 Chebyshev-Lobatto points of [0, L].
    static ChebyshevSeries interpolate(const std::function<real(real)>& f, double length, int degree);

    double length() const { return length_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<real>& coeffs() const { return c_; }

    real operator()(real x) const;  // Clenshaw evaluation
    ChebyshevSeries derivative() const;
    ChebyshevSeries integral() const;  // antiderivative vanishing at 0
    // (f(x) - f(0)) / x, by synthetic division in coefficient space.
    ChebyshevSeries divided_by_x() const;
    // Taylor coefficients f^(k)(0)/k!, k = 0..count-1, via spectral differentiation.
    std::vector<real> taylor_at_zero(int count) const;
    // Drops trailing coefficients below tol * max|c_k|.
    ChebyshevSeries chopped(real tol = 1e-18L) const;
    // Drops the trailing noise plateau: the floor is estimated from the last
    // quarter of the coefficients and everything below a multiple of it is cut.
    ChebyshevSeries denoised() const;

    ChebyshevSeries operator+(const ChebyshevSeries& o) const;
    ChebyshevSeries operator-(const ChebyshevSeries& o) const;
    ChebyshevSeries operator*(real s) const;

private:
    std::vector<real> c_;
    double length_ = 1.0;
};

// Chebyshev points of the second kind on [0, L] in increasing order.
std::vector<long double> chebyshev_lobatto_points(double length, int degree);

}  // namespace magwkb
