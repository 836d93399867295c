#include "magwkb/tridiagonal.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

namespace magwkb {

std::vector<double> SymmetricTridiagonal::apply(const std::vector<double>& x) const {
    const int n = size();
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = diagonal[i] * x[i];
        if (i > 0) s += off_diagonal[i - 1] * x[i - 1];
        if (i + 1 < n) s += off_diagonal[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double SymmetricTridiagonal::norm_inf() const {
    double m = 0;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        double s = std::abs(diagonal[i]);
        if (i > 0) s += std::abs(off_diagonal[i - 1]);
        if (i + 1 < n) s += std::abs(off_diagonal[i]);
        m = std::max(m, s);
    }
    return m;
}

std::vector<double> tridiagonal_lowest_eigenvalues(const SymmetricTridiagonal& t, int k) {
    const int n = t.size();
    if (k < 1 || k > n) throw std::invalid_argument("tridiagonal_lowest_eigenvalues: k out of range");
    std::vector<double> d = t.diagonal, e = t.off_diagonal, w(n);
    std::vector<lapack_int> iblock(n), isplit(n);
    lapack_int found = 0, nsplit = 0;
    const lapack_int info = LAPACKE_dstebz('I', 'E', n, 0.0, 0.0, 1, k, 2 * DBL_MIN, d.data(), e.data(), &found,
                                           &nsplit, w.data(), iblock.data(), isplit.data());
    if (info != 0 || found != k)
        throw std::runtime_error("tridiagonal eigenvalue bisection failed (info " + std::to_string(info) + ")");
    w.resize(k);
    return w;
}

std::vector<double> tridiagonal_eigenvector(const SymmetricTridiagonal& t, double lambda) {
    const int n = t.size();
    const auto& b = t.off_diagonal;
    std::vector<double> dp(n), dm(n);
    auto guard = [](double v) { return v == 0 ? DBL_MIN : v; };
    dp[0] = guard(t.diagonal[0] - lambda);
    for (int i = 1; i < n; ++i) dp[i] = guard(t.diagonal[i] - lambda - b[i - 1] * b[i - 1] / dp[i - 1]);
    dm[n - 1] = guard(t.diagonal[n - 1] - lambda);
    for (int i = n - 2; i >= 0; --i) dm[i] = guard(t.diagonal[i] - lambda - b[i] * b[i] / dm[i + 1]);
    // Twist index: where gamma_k = D+_k + D-_k - (d_k - lambda) is smallest.
    int k = 0;
    double best = INFINITY;
    for (int i = 0; i < n; ++i) {
        const double g = std::abs(dp[i] + dm[i] - (t.diagonal[i] - lambda));
        if (g < best) {
            best = g;
            k = i;
        }
    }
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    for (int i = k - 1; i >= 0; --i) v[i] = -b[i] / dp[i] * v[i + 1];
    for (int i = k + 1; i < n; ++i) v[i] = -b[i - 1] / dm[i] * v[i - 1];
    double s = 0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    double sign = 1.0;
    double big = 0;
    for (double x : v)
        if (std::abs(x) > big) {
            big = std::abs(x);
            sign = x < 0 ? -1.0 : 1.0;
        }
    for (auto& x : v) x *= sign / s;
    return v;
}

}  // namespace magwkb
