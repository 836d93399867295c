#include "magwkb/normalize.hpp"

#include <cmath>
#include <stdexcept>

namespace magwkb {

NormalizedField normalize_quadratic(const TruncatedSeries2& b, const TruncatedSeries2& eta) {
    if (b.order() < 2) throw std::invalid_argument("normalize_quadratic: B needs Taylor data through order 2");
    if (std::abs(b(1, 0)) > 1e-14 || std::abs(b(0, 1)) > 1e-14)
        throw std::invalid_argument("normalize_quadratic: linear terms of B must vanish (expand at the field minimum)");
    Eigen::Matrix2d q;
    q << b(2, 0).real(), 0.5 * b(1, 1).real(), 0.5 * b(1, 1).real(), b(0, 2).real();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
    const Eigen::Vector2d ev = es.eigenvalues();  // ascending
    if (!(ev[0] > 0))
        throw std::invalid_argument(
            "normalize_quadratic: the Hessian of B at the minimum must be positive definite (nondegenerate minimum)");
    Eigen::Matrix2d r;
    if (b(1, 1) == cplx{} && q(0, 0) <= q(1, 1)) {
        r.setIdentity();
    } else {
        r = es.eigenvectors();
        for (int c = 0; c < 2; ++c) {
            const int big = std::abs(r(0, c)) >= std::abs(r(1, c)) ? 0 : 1;
            if (r(big, c) < 0) r.col(c) *= -1;
        }
        if (r.determinant() < 0) r.col(1) *= -1;
    }
    const std::array<std::array<cplx, 2>, 2> m{{{r(0, 0), r(0, 1)}, {r(1, 0), r(1, 1)}}};
    TruncatedSeries2 nb = linear_substitute(b, m);
    TruncatedSeries2 ne = linear_substitute(eta, m);
    // The rotation makes the mixed term vanish analytically; drop its rounding.
    nb.at(1, 1) = 0.0;
    nb.at(2, 0) = ev[0];
    nb.at(0, 2) = ev[1];
    return {FieldSpecSurface::from_taylor(nb, ne), r};
}

}  // namespace magwkb
