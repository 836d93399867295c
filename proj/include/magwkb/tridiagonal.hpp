#pragma once

#include <vector>

namespace magwkb {

// Real symmetric tridiagonal matrix.
struct SymmetricTridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;  // size n-1

    int size() const { return static_cast<int>(diagonal.size()); }
    std::vector<double> apply(const std::vector<double>& x) const;
    // Max absolute row sum.
    double norm_inf() const;
};

// The k lowest eigenvalues in increasing order (LAPACK bisection, full accuracy).
std::vector<double> tridiagonal_lowest_eigenvalues(const SymmetricTridiagonal& t, int k);

// Unit eigenvector for an accurate eigenvalue, from a twisted factorization.
// Unlike inverse iteration, entries far in the exponentially small tail keep
// their relative accuracy, which the weighted-norm checks depend on.
std::vector<double> tridiagonal_eigenvector(const SymmetricTridiagonal& t, double lambda);

}  // namespace magwkb
