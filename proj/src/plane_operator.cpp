#include <boost/math/quadrature/gauss.hpp>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "magwkb/operators.hpp"

namespace magwkb {

using cplx = std::complex<double>;

namespace {

using GaussB = boost::math::quadrature::gauss<double, 20>;
using GaussEdge = boost::math::quadrature::gauss<double, 8>;

// alpha(q) = int_0^1 t B(t q) dt, so that A = alpha(q) (-q2, q1) has curl B.
double gauge_alpha(const PlaneField& f, double q1, double q2) {
    return GaussB::integrate([&](double t) { return t * f.B(t * q1, t * q2); }, 0.0, 1.0);
}

}  // namespace

// -------------------------------------------------------------- OperatorMatrix

double OperatorMatrix::norm_inf() const {
    if (is_tridiagonal()) return tridiagonal.norm_inf();
    double m = 0;
    std::vector<double> rows(sparse.rows(), 0.0);
    for (int k = 0; k < sparse.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(sparse, k); it; ++it) rows[it.row()] += std::abs(it.value());
    for (double r : rows) m = std::max(m, r);
    return m;
}

std::vector<double> OperatorMatrix::apply(const std::vector<double>& psi) const {
    if (!is_tridiagonal()) throw std::invalid_argument("OperatorMatrix::apply: plane operators act on complex samples");
    const int n = size();
    if (static_cast<int>(psi.size()) != n) throw std::invalid_argument("OperatorMatrix::apply: size mismatch");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sqrt(weights[i]) * psi[i];
    auto y = tridiagonal.apply(x);
    for (int i = 0; i < n; ++i) y[i] /= std::sqrt(weights[i]);
    return y;
}

std::vector<cplx> OperatorMatrix::apply(const std::vector<cplx>& psi) const {
    const int n = size();
    if (static_cast<int>(psi.size()) != n) throw std::invalid_argument("OperatorMatrix::apply: size mismatch");
    if (is_tridiagonal()) {
        std::vector<double> re(n), im(n);
        for (int i = 0; i < n; ++i) {
            re[i] = psi[i].real();
            im[i] = psi[i].imag();
        }
        const auto a = apply(re), b = apply(im);
        std::vector<cplx> out(n);
        for (int i = 0; i < n; ++i) out[i] = {a[i], b[i]};
        return out;
    }
    Eigen::VectorXcd x(n);
    for (int i = 0; i < n; ++i) x[i] = std::sqrt(weights[i]) * psi[i];
    const Eigen::VectorXcd y = sparse * x;
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) out[i] = y[i] / std::sqrt(weights[i]);
    return out;
}

double OperatorMatrix::hermiticity_defect() const {
    if (is_tridiagonal()) return 0.0;  // stored as a symmetric pair by construction
    const Eigen::SparseMatrix<cplx> adj = sparse.adjoint();
    const Eigen::SparseMatrix<cplx> d = sparse - adj;
    double m = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
    return m / norm_inf();
}

std::vector<double> EigenPair::real_vector() const {
    std::vector<double> v(vector.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = vector[i].real();
    return v;
}

// ------------------------------------------------------------------ PlaneField

PlaneField PlaneField::from_radial(const RadialField& field) {
    PlaneField f;
    f.B = [field](double q1, double q2) { return field.beta(0.5 * (q1 * q1 + q2 * q2)); };
    f.descriptor = "radial field";
    return f;
}

PlaneField PlaneField::from_surface(const FieldSpecSurface& field) {
    PlaneField f;
    const TruncatedSeries2 b = field.b_taylor, eta = field.eta_taylor;
    f.B = [b](double q1, double q2) { return b.evaluate(q1, q2).real(); };
    f.eta = [eta](double q1, double q2) { return eta.evaluate(q1, q2).real(); };
    f.descriptor = "surface field";
    return f;
}

// ---------------------------------------------------------------- 2D operator

OperatorMatrix build_2d_operator(const PlaneField& field, double h, int n_grid, const PlaneBox& box) {
    if (!(h > 0)) throw std::invalid_argument("build_2d_operator: h must be positive");
    if (n_grid < 3) throw std::invalid_argument("build_2d_operator: n_grid must be at least 3");
    if (!(box.hi > box.lo) || !(box.lo < 0 && box.hi > 0))
        throw std::invalid_argument("build_2d_operator: box must contain the field minimum at the origin");
    if (!field.B) throw std::invalid_argument("build_2d_operator: field B missing");
    const int n = n_grid;
    const double d = (box.hi - box.lo) / (n + 1);
    OperatorMatrix op;
    op.kind = OperatorKind::plane;
    op.h = h;
    op.xs.resize(n);
    for (int i = 0; i < n; ++i) op.xs[i] = box.lo + (i + 1) * d;
    op.ys = op.xs;
    const int N = n * n;
    std::vector<double> eta(N, 0.0);
    double bmin = INFINITY, emin = INFINITY;
    op.weights.resize(N);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int p = i + n * j;
            eta[p] = field.eta ? field.eta(op.xs[i], op.ys[j]) : 0.0;
            op.weights[p] = d * d * std::exp(2 * eta[p]);
            bmin = std::min(bmin, field.B(op.xs[i], op.ys[j]));
            emin = std::min(emin, std::exp(-2 * eta[p]));
        }
    if (!(bmin > 0)) throw std::invalid_argument("build_2d_operator: B must be positive on the box");
    // Lowest eigenvalue is close to h min(e^{-2 eta} B); discretization can only
    // shift it by a fraction of that, so 0.9 of it is a safe shift.
    op.spectral_floor = 0.9 * h * bmin * emin;

    // Peierls phase along a straight edge: theta = (1/h) int A . dl.
    auto edge_phase = [&](double x0, double y0, double dx, double dy) {
        const double integral = GaussEdge::integrate(
            [&](double s) {
                const double q1 = x0 + s * dx, q2 = y0 + s * dy;
                const double a = gauge_alpha(field, q1, q2);
                return a * (-q2 * dx + q1 * dy);
            },
            0.0, 1.0);
        return integral / h;
    };

    const double hop = h * h / (d * d);
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(5 * N);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int p = i + n * j;
            const double sp = std::exp(-eta[p]);
            trip.emplace_back(p, p, 4 * hop * sp * sp);
            if (i + 1 < n) {
                const int q = p + 1;
                const cplx v = -hop * sp * std::exp(-eta[q]) * std::polar(1.0, -edge_phase(op.xs[i], op.ys[j], d, 0));
                trip.emplace_back(p, q, v);
                trip.emplace_back(q, p, std::conj(v));
            }
            if (j + 1 < n) {
                const int q = p + n;
                const cplx v = -hop * sp * std::exp(-eta[q]) * std::polar(1.0, -edge_phase(op.xs[i], op.ys[j], 0, d));
                trip.emplace_back(p, q, v);
                trip.emplace_back(q, p, std::conj(v));
            }
        }
    op.sparse.resize(N, N);
    op.sparse.setFromTriplets(trip.begin(), trip.end());
    op.descriptor = "plane magnetic Laplacian (" + field.descriptor + ", h=" + std::to_string(h) + ", " +
                    std::to_string(n) + "x" + std::to_string(n) + ", box=[" + std::to_string(box.lo) + "," +
                    std::to_string(box.hi) + "]^2)";
    return op;
}

// -------------------------------------------------------------------- solvers

namespace {

std::vector<EigenPair> solve_tridiagonal(const OperatorMatrix& op, int k) {
    const auto values = tridiagonal_lowest_eigenvalues(op.tridiagonal, k);
    std::vector<EigenPair> out;
    for (double lam : values) {
        const auto x = tridiagonal_eigenvector(op.tridiagonal, lam);
        EigenPair p;
        p.value = lam;
        p.vector.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) p.vector[i] = x[i] / std::sqrt(op.weights[i]);
        out.push_back(std::move(p));
    }
    return out;
}

EigenPair make_pair(const OperatorMatrix& op, double value, const Eigen::VectorXcd& x) {
    EigenPair p;
    p.value = value;
    p.vector.resize(x.size());
    // Fix the phase so that the largest entry is real positive.
    Eigen::Index imax = 0;
    x.cwiseAbs().maxCoeff(&imax);
    const cplx phase = std::abs(x[imax]) > 0 ? std::conj(x[imax]) / std::abs(x[imax]) : cplx(1.0);
    const double nrm = x.norm();
    for (Eigen::Index i = 0; i < x.size(); ++i) p.vector[i] = phase * x[i] / nrm / std::sqrt(op.weights[i]);
    return p;
}

std::vector<EigenPair> solve_dense(const OperatorMatrix& op, int k) {
    const Eigen::MatrixXcd H = Eigen::MatrixXcd(op.sparse);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed for " + op.descriptor);
    std::vector<EigenPair> out;
    for (int i = 0; i < k; ++i) out.push_back(make_pair(op, es.eigenvalues()[i], es.eigenvectors().col(i)));
    return out;
}

Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& Y) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(Y.rows(), Y.cols());
}

// Shift-invert subspace iteration with Rayleigh-Ritz. A block method is used
// because Landau-type spectra contain (near-)degenerate clusters.
std::vector<EigenPair> solve_shift_invert(const OperatorMatrix& op, int k) {
    const int n = op.size();
    const int p = std::min(n, k + 6);
    const double scale = op.norm_inf();
    double sigma = op.spectral_floor;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<cplx>> llt;
    Eigen::SparseMatrix<cplx> id(n, n);
    id.setIdentity();
    for (int attempt = 0;; ++attempt) {
        llt.compute(op.sparse - sigma * id);
        if (llt.info() == Eigen::Success) break;
        if (attempt == 20) throw std::runtime_error("shift-invert factorization failed for " + op.descriptor);
        sigma -= 0.5 * std::abs(sigma) + 1e-3 * scale;  // shift was inside the spectrum
    }
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd X(n, p);
    for (int j = 0; j < p; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = cplx(g(rng), g(rng));
    X = orthonormal_basis(X);
    Eigen::VectorXd theta;
    const double tol = 1e-11 * scale;
    for (int it = 0; it < 2000; ++it) {
        const Eigen::MatrixXcd Q = orthonormal_basis(llt.solve(X));
        const Eigen::MatrixXcd HQ = op.sparse * Q;
        const Eigen::MatrixXcd G = Q.adjoint() * HQ;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
        X = Q * es.eigenvectors();
        theta = es.eigenvalues();
        const Eigen::MatrixXcd R = HQ * es.eigenvectors() - X * theta.asDiagonal();
        double worst = 0;
        for (int j = 0; j < k; ++j) worst = std::max(worst, R.col(j).norm());
        if (worst <= tol) {
            std::vector<EigenPair> out;
            for (int j = 0; j < k; ++j) out.push_back(make_pair(op, theta[j], X.col(j)));
            return out;
        }
    }
    throw std::runtime_error("shift-invert subspace iteration did not converge for " + op.descriptor);
}

}  // namespace

std::vector<EigenPair> eigen_solve(const OperatorMatrix& op, int k, bool dense) {
    if (k < 1) throw std::invalid_argument("eigen_solve: k must be >= 1");
    if (k > op.size()) throw std::invalid_argument("eigen_solve: k exceeds the matrix size");
    if (op.is_tridiagonal()) return solve_tridiagonal(op, k);
    return dense ? solve_dense(op, k) : solve_shift_invert(op, k);
}

double boundary_mass_fraction(const OperatorMatrix& op, const EigenPair& pair) {
    if (op.is_tridiagonal()) throw std::invalid_argument("boundary_mass_fraction: plane operators only");
    const int n = static_cast<int>(op.xs.size());
    const double lo = op.xs.front(), hi = op.xs.back();
    const double frame = 0.05 * (hi - lo);
    double total = 0, edge = 0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int p = i + n * j;
            const double m = op.weights[p] * std::norm(pair.vector[p]);
            total += m;
            const double x = op.xs[i], y = op.ys[j];
            if (x < lo + frame || x > hi - frame || y < lo + frame || y > hi - frame) edge += m;
        }
    return edge / total;
}

}  // namespace magwkb
