#include <cmath>
#include <stdexcept>
#include <string>

#include "magwkb/operators.hpp"

namespace magwkb {

namespace {

// -2c t^{-m} d/dt t^{m+1} d/dt + W(t) on staggered nodes, symmetrized.
OperatorMatrix conjugated_radial(OperatorKind kind, double c, int m, int n, double t_max,
                                 const std::function<double(double)>& W) {
    if (n < 3) throw std::invalid_argument("radial operator: n_grid must be at least 3");
    if (!(t_max > 0)) throw std::invalid_argument("radial operator: window must be positive");
    if (m < 0) throw std::invalid_argument("radial operator: m must be nonnegative");
    const double d = t_max / (n + 0.5);
    OperatorMatrix op;
    op.kind = kind;
    op.m = m;
    op.nodes.resize(n);
    op.weights.assign(n, d);
    op.tridiagonal.diagonal.resize(n);
    op.tridiagonal.off_diagonal.resize(n - 1);
    const double s = 2 * c / (d * d);
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * d, tp = (i + 1.0) * d, tm = i * d;
        op.nodes[i] = t;
        op.tridiagonal.diagonal[i] = s * (std::pow(tp / t, m) * tp + std::pow(tm / t, m) * tm) + W(t);
        if (i + 1 < n) {
            const double t1 = (i + 1.5) * d;
            op.tridiagonal.off_diagonal[i] = -s * tp * std::pow(tp * tp / (t * t1), 0.5 * m);
        }
    }
    return op;
}

}  // namespace

double spectral_window(const RadialField& field, double h, double depth) {
    if (field.is_constant()) return 2.0 * depth * h / field.beta0();  // phi = beta0 rho / 2
    return field.phase_inverse(depth * h);
}

OperatorMatrix build_radial_operator(const RadialField& field, double h, int m, int n_grid, double rho_max) {
    if (!(h > 0)) throw std::invalid_argument("build_radial_operator: h must be positive");
    const double d = rho_max / (n_grid + 0.5);
    if (h / d < 8)
        throw std::invalid_argument("build_radial_operator: grid too coarse (" + std::to_string(h / d) +
                                    " nodes per well width h; at least 8 required)");
    auto W = [&](double r) {
        const double a = field.flux(r);
        return a * a / (2 * r) - h * m * a / r;
    };
    OperatorMatrix op = conjugated_radial(OperatorKind::radial_fiber, h * h, m, n_grid, rho_max, W);
    op.h = h;
    op.descriptor = "radial fiber operator N(h=" + std::to_string(h) + ", m=" + std::to_string(m) +
                    ", n=" + std::to_string(n_grid) + ", rho_max=" + std::to_string(rho_max) + ")";
    return op;
}

OperatorMatrix build_rescaled_operator(const RadialField& field, double h, int m, int n_grid, double t_max) {
    if (!(h > 0)) throw std::invalid_argument("build_rescaled_operator: h must be positive");
    if ((n_grid + 0.5) / t_max < 8)
        throw std::invalid_argument("build_rescaled_operator: grid too coarse (at least 8 nodes per unit t required)");
    auto W = [&](double t) {
        const double a = field.flux(h * t) / h;
        return a * a / (2 * t) - m * a / t;
    };
    OperatorMatrix op = conjugated_radial(OperatorKind::rescaled_fiber, 1.0, m, n_grid, t_max, W);
    op.h = h;
    op.descriptor = "rescaled fiber operator M(h=" + std::to_string(h) + ", m=" + std::to_string(m) +
                    ", n=" + std::to_string(n_grid) + ", t_max=" + std::to_string(t_max) + ")";
    return op;
}

OperatorMatrix build_model_operator(int m, double beta0, int n_grid, double t_max) {
    if (!(beta0 > 0)) throw std::invalid_argument("build_model_operator: beta(0) > 0 required");
    if (t_max <= 0) t_max = 60.0 / beta0;
    if ((n_grid + 0.5) / t_max * (1.0 / beta0) < 8)
        throw std::invalid_argument("build_model_operator: grid too coarse (at least 8 nodes per unit 1/beta0)");
    auto W = [&](double t) { return 0.5 * beta0 * beta0 * t - m * beta0; };
    OperatorMatrix op = conjugated_radial(OperatorKind::model, 1.0, m, n_grid, t_max, W);
    op.descriptor = "model operator (m=" + std::to_string(m) + ", beta0=" + std::to_string(beta0) +
                    ", n=" + std::to_string(n_grid) + ", t_max=" + std::to_string(t_max) + ")";
    return op;
}

}  // namespace magwkb
