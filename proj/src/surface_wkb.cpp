#include "magwkb/surface_wkb.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace magwkb {

namespace {

constexpr double kStructuralTol = 1e-10;

bool has_real_coefficients(const TruncatedSeries2& s) {
    for (int m = 0; m <= s.order(); ++m)
        for (int n = 0; m + n <= s.order(); ++n)
            if (std::abs(s(m, n).imag()) > kStructuralTol * std::max(1.0, std::abs(s(m, n)))) return false;
    return true;
}

TruncatedSeries1 pad_to(const TruncatedSeries1& s, int order) {
    TruncatedSeries1 r(order);
    for (int k = 0; k <= std::min(order, s.order()); ++k) r.at(k) = s[k];
    return r;
}

}  // namespace

FieldSpecSurface FieldSpecSurface::from_taylor(TruncatedSeries2 b, TruncatedSeries2 eta) {
    FieldSpecSurface f;
    f.b0 = b(0, 0).real();
    f.alpha = b(2, 0).real();
    f.gamma = b(0, 2).real();
    f.b_taylor = std::move(b);
    f.eta_taylor = std::move(eta);
    f.validate();
    return f;
}

void FieldSpecSurface::validate() const {
    if (b_taylor.order() < 2) throw std::invalid_argument("field: Taylor data of B must reach order 2");
    if (eta_taylor.order() < 0) throw std::invalid_argument("field: Taylor data of eta is empty");
    if (!has_real_coefficients(b_taylor) || !has_real_coefficients(eta_taylor))
        throw std::invalid_argument("field: Taylor data must be real in (q1,q2)");
    if (!(b0 > 0)) throw std::invalid_argument("field: B(0) = b0 must be positive");
    const double scale = std::max({1.0, std::abs(b0), std::abs(alpha), std::abs(gamma)});
    if (std::abs(b_taylor(1, 0)) > kStructuralTol * scale || std::abs(b_taylor(0, 1)) > kStructuralTol * scale)
        throw std::invalid_argument("field: linear terms of B must vanish (origin must be a critical point)");
    if (std::abs(b_taylor(1, 1)) > kStructuralTol * scale)
        throw std::invalid_argument("field: quadratic part of B is not diagonal; normalize the quadratic form first");
    if (!(alpha > 0) || !(gamma > 0))
        throw std::invalid_argument("field: Hessian of B at the minimum must be positive definite (alpha, gamma > 0)");
    if (alpha > gamma * (1 + 1e-14))
        throw std::invalid_argument("field: normal form requires alpha <= gamma");
    if (std::abs(b_taylor(0, 0).real() - b0) > kStructuralTol * scale ||
        std::abs(b_taylor(2, 0).real() - alpha) > kStructuralTol * scale ||
        std::abs(b_taylor(0, 2).real() - gamma) > kStructuralTol * scale)
        throw std::invalid_argument("field: b0/alpha/gamma disagree with the Taylor data");
}

TruncatedSeries2 poisson_normal_form(const FieldSpecSurface& field) {
    field.validate();
    const int N = field.order();
    const TruncatedSeries2 rhs = exp(complexify(field.eta_taylor.truncated(N)) * cplx(2.0)) *
                                 complexify(field.b_taylor.truncated(N));
    TruncatedSeries2 psi(N + 2);
    for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n) psi.at(m + 1, n + 1) = rhs(m, n) / (4.0 * (m + 1) * (n + 1));
    return psi;
}

TruncatedSeries1 solve_curve_w(const FieldSpecSurface& field) {
    field.validate();
    const int N = field.b_taylor.order() - 1;
    const TruncatedSeries2 bt = complexify(field.b_taylor);
    const double sa = std::sqrt(field.alpha), sg = std::sqrt(field.gamma);
    TruncatedSeries1 w(N);
    if (N >= 1) w.at(1) = (sg - sa) / (sg + sa);
    // Coefficient of z^{p+1} in B~(z,w(z)) is linear in w_p with this prefactor
    // (equal to sqrt(alpha*gamma)).
    const cplx prefactor = bt(1, 1) + 2.0 * bt(0, 2) * w[1];
    if (std::abs(prefactor) < 1e-300) throw std::invalid_argument("solve_curve_w: degenerate prefactor");
    for (int p = 2; p <= N; ++p) {
        TruncatedSeries1 trial = pad_to(w.truncated(p - 1), p + 1);
        const TruncatedSeries1 r = substitute_curve(bt.truncated(p + 1), trial);
        w.at(p) = -r[p + 1] / prefactor;
    }
    return w;
}

TruncatedSeries1 solve_phase_f(const TruncatedSeries2& psi, const TruncatedSeries1& w_curve) {
    const TruncatedSeries1 fprime = substitute_curve(psi.partial_first(), w_curve) * cplx(-2.0);
    return fprime.integral();
}

FormalOdeResult formal_ode_solve(const TruncatedSeries2& V, const TruncatedSeries2& F,
                                 const std::optional<TruncatedSeries2>& G, int level,
                                 const TruncatedSeries1& seed) {
    if (level < 0) throw std::invalid_argument("formal_ode_solve: level must be nonnegative");
    int N = std::min(V.order(), F.order());
    if (G) N = std::min(N, G->order());
    if (V.order() < 1) throw std::invalid_argument("formal_ode_solve: V must be known through order 1");
    const TruncatedSeries1 v1 = V.column(1);
    const cplx v1c = v1[0];
    const double vscale = std::max(1.0, std::abs(v1c));
    if (std::abs(v1c) < 1e-300) throw std::invalid_argument("formal_ode_solve: v1 must be nonzero");
    if (V.column(0).max_abs() > kStructuralTol * vscale)
        throw std::invalid_argument("formal_ode_solve: v0(s) must vanish");
    for (int k = 1; k <= v1.order(); ++k)
        if (std::abs(v1[k]) > kStructuralTol * vscale)
            throw std::invalid_argument("formal_ode_solve: v1(s) must be constant");
    const TruncatedSeries1 f0 = F.column(0);
    for (int k = 1; k <= f0.order(); ++k)
        if (std::abs(f0[k]) > kStructuralTol * std::max(vscale, std::abs(f0[0])))
            throw std::invalid_argument("formal_ode_solve: f0(s) must be constant");
    if (!G && std::abs(f0[0] + double(level) * v1c) > kStructuralTol * vscale * (1 + level))
        throw std::invalid_argument("formal_ode_solve: homogeneous problem needs f0 + level*v1 = 0");

    std::vector<TruncatedSeries1> u;
    TruncatedSeries1 defect(N - level);
    for (int m = 0; m <= N; ++m) {
        const int om = N - m;
        TruncatedSeries1 acc(om);
        if (G) acc += G->column(m).truncated(om);
        for (int j = 0; j < m; ++j) {
            // Column j of u is known through N-j >= om; the j=0 V-term vanishes.
            const TruncatedSeries1 uj = u[j].truncated(om);
            TruncatedSeries1 coef = F.column(m - j).truncated(om);
            if (j > 0) coef += V.column(m - j + 1).truncated(om) * cplx(double(j));
            acc -= coef * uj;
        }
        if (m == level) {
            defect = acc;
            u.push_back(pad_to(seed, om));
        } else {
            u.push_back(acc * (1.0 / (double(m - level) * v1c)));
        }
    }
    TruncatedSeries2 sol(N);
    for (int m = 0; m <= N; ++m) sol.set_column(m, u[m]);
    return {sol, defect};
}

int cascade_working_order(int level, int J) { return 4 * J + level + 4; }
int cascade_required_field_order(int level, int J) { return cascade_working_order(level, J) + 1; }

namespace {

// The first-order ODE a(z) c' + (b(z) + mu1) c = rhs(z) at level l, posed as
// a formal_ode_solve problem in the second variable.
struct LevelOde {
    TruncatedSeries1 a, b_plus_mu1;
    int level;

    FormalOdeResult solve(const std::optional<TruncatedSeries1>& rhs, const TruncatedSeries1& seed) const {
        int N = std::min(a.order(), b_plus_mu1.order());
        if (rhs) N = std::min(N, rhs->order());
        if (N < level)
            throw std::runtime_error("transport_cascade: working truncation is insufficient for the requested order");
        const auto V = TruncatedSeries2::from_second(a, N);
        const auto F = TruncatedSeries2::from_second(b_plus_mu1, N);
        std::optional<TruncatedSeries2> G;
        if (rhs) G = TruncatedSeries2::from_second(*rhs, N);
        return formal_ode_solve(V, F, G, level, seed);
    }

    cplx defect(const TruncatedSeries1& rhs) const {
        return solve(rhs, TruncatedSeries1::constant(0.0, 0)).solvability_defect[0];
    }
};

TruncatedSeries1 first_row(const FormalOdeResult& r) { return r.solution.row(0); }

}  // namespace

SurfaceWkbExpansion transport_cascade(const FieldSpecSurface& field, int level, int J) {
    field.validate();
    if (level < 0 || J < 0) throw std::invalid_argument("transport_cascade: level and J must be nonnegative");
    const int N = cascade_working_order(level, J);
    if (field.order() < N + 1)
        throw std::invalid_argument("transport_cascade: field Taylor order " + std::to_string(field.order()) +
                                    " is below the required " + std::to_string(N + 1));
    FieldSpecSurface fld = field;
    fld.b_taylor = field.b_taylor.truncated(N + 1);
    fld.eta_taylor = field.eta_taylor.truncated(N + 1);
    const double b0 = fld.b0;

    const TruncatedSeries2 bt = complexify(fld.b_taylor);
    const TruncatedSeries2 eta = complexify(fld.eta_taylor);
    const TruncatedSeries2 einv = exp(eta * cplx(-2.0));  // e^{-2 eta} in (z,w)

    SurfaceWkbExpansion out;
    out.level = level;
    out.working_order = N;
    out.psi = poisson_normal_form(fld);
    out.w_curve = solve_curve_w(fld);
    out.f_phase = solve_phase_f(out.psi, out.w_curve);
    out.s_phase = out.psi.truncated(N + 1) + TruncatedSeries2::from_first(out.f_phase, N + 1);

    const TruncatedSeries1& w = out.w_curve;
    const TruncatedSeries1 fprime = out.f_phase.derivative();
    const TruncatedSeries1 wprime = w.derivative();
    const TruncatedSeries2 dzpsi = out.psi.partial_first();

    // Transport operators in (z, y), y = w - w(z).
    const TruncatedSeries2 ehat = shift_variable(einv.truncated(N), w);
    const TruncatedSeries2 V =
        ehat * (TruncatedSeries2::from_first(fprime, N) + shift_variable(dzpsi.truncated(N), w) * cplx(2.0)) *
        cplx(4.0);
    const TruncatedSeries2 F = shift_variable(bt.truncated(N), w) + cplx(-b0);
    const TruncatedSeries2 wprime2 = TruncatedSeries2::from_first(wprime, N - 1);
    auto D = [&](const TruncatedSeries2& u) {
        const TruncatedSeries2 uy = u.partial_second();
        return ehat * (uy.partial_first() - wprime2 * uy.partial_second()) * cplx(4.0);
    };

    // Homogeneous solutions c(z) K(z,y), K normalised by K(z,0) = 1.
    const TruncatedSeries2 K =
        formal_ode_solve(V, F, std::nullopt, 0, TruncatedSeries1::constant(1.0, 0)).solution;
    auto homogeneous = [&](const TruncatedSeries1& c) {
        return TruncatedSeries2::from_first(pad_to(c, K.order()), std::min(K.order(), c.order())) * K;
    };

    // Solvability of the y^0 component: a c' + (b + mu1) c = rhs.
    const TruncatedSeries1 e0 = ehat.column(0);
    const TruncatedSeries1 k1 = K.column(1), k2 = K.column(2);
    const TruncatedSeries1 a = e0 * k1 * cplx(4.0);
    const TruncatedSeries1 b = e0 * (k1.derivative() - wprime * k2 * cplx(2.0)) * cplx(4.0);
    const cplx mu1 = -(b[0] + double(level) * a[1]);

    LevelOde zode{a, b + mu1, level};
    // Normalisation [c_0]_level = 1 (the first `level` coefficients vanish).
    std::vector<TruncatedSeries1> c{first_row(zode.solve(std::nullopt, TruncatedSeries1::constant(1.0, 0)))};
    std::vector<cplx> mu{b0, mu1};
    std::vector<TruncatedSeries2> A{homogeneous(c[0])};

    for (int n = 1; n <= J; ++n) {
        TruncatedSeries2 rhs = A[n - 1] * mu[1] + D(A[n - 1]);
        for (int j = 2; j <= n; ++j) rhs += A[n - j] * mu[j];
        const TruncatedSeries2 P = formal_ode_solve(V, F, rhs, 0, TruncatedSeries1::constant(0.0, 0)).solution;

        const TruncatedSeries1 base = D(P).column(0);
        TruncatedSeries1 known = base;
        for (int j = 2; j <= n; ++j) known += c[n + 1 - j] * mu[j];
        const TruncatedSeries1 g0 = -known;
        // The defect is affine in mu_{n+1}; pick the value that cancels it.
        const cplx d0 = zode.defect(g0);
        const cplx d1 = zode.defect(g0 - c[0]);
        if (std::abs(d1 - d0) < 1e-300) throw std::runtime_error("transport_cascade: singular solvability condition");
        const cplx mun = -d0 / (d1 - d0);
        mu.push_back(mun);
        c.push_back(first_row(zode.solve(g0 - c[0] * mun, TruncatedSeries1::constant(0.0, 0))));
        A.push_back(P.truncated(std::min(P.order(), c[n].order())) + homogeneous(c[n]));
    }

    for (const cplx& m : mu) {
        if (std::abs(m.imag()) > 1e-8 * std::max(1.0, std::abs(m)))
            throw std::runtime_error("transport_cascade: quasi-eigenvalue coefficient is not real");
        out.mu.push_back(m.real());
    }
    out.amplitudes_shifted = A;
    const TruncatedSeries1 minus_w = -w;
    for (const auto& amp : A) out.amplitudes.push_back(shift_variable(amp, minus_w));
    return out;
}

HessianInvariants hessian_invariants(double alpha, double gamma, double eta0) {
    if (!(alpha > 0) || !(gamma > 0)) throw std::invalid_argument("hessian_invariants: alpha, gamma must be positive");
    return {std::exp(-4 * eta0) * alpha * gamma, std::exp(-eta0) * (std::sqrt(alpha) + std::sqrt(gamma))};
}

double mu1_closed_form(double alpha, double gamma, double eta0, double b0, int level) {
    const double s = std::sqrt(alpha) + std::sqrt(gamma);
    return std::exp(-2 * eta0) * (2 * level * std::sqrt(alpha * gamma) + s * s / 2) / b0;
}

double mu1_from_invariants(const HessianInvariants& inv, double b0, int level) {
    return 2 * level * std::sqrt(inv.det) / b0 + inv.trace_sqrt * inv.trace_sqrt / (2 * b0);
}

double eikonal_residual(const SurfaceWkbExpansion& e) {
    const int N = std::min(e.psi.order(), e.s_phase.order());
    const TruncatedSeries2 psi = realify(e.psi.truncated(N));
    const TruncatedSeries2 s = realify(e.s_phase.truncated(N));
    const cplx i(0, 1);
    const TruncatedSeries2 a1 = -psi.partial_second();
    const TruncatedSeries2 a2 = psi.partial_first();
    const TruncatedSeries2 t1 = -a1 + s.partial_first() * i;
    const TruncatedSeries2 t2 = -a2 + s.partial_second() * i;
    return (t1 * t1 + t2 * t2).max_abs();
}

std::vector<double> transport_residuals(const FieldSpecSurface& field, const SurfaceWkbExpansion& e) {
    // In (z,w) the transport operator is 4E~(f' + 2 d_z psi) d_w + (B~ - b0),
    // and the coupling operator is 4E~ d_z d_w.
    const int N = e.working_order;
    const TruncatedSeries2 bt = complexify(field.b_taylor.truncated(N + 1));
    const TruncatedSeries2 einv = exp(complexify(field.eta_taylor.truncated(N + 1)) * cplx(-2.0));
    const TruncatedSeries2 vt =
        einv * (TruncatedSeries2::from_first(e.f_phase.derivative(), N) + e.psi.partial_first() * cplx(2.0)) *
        cplx(4.0);
    auto T = [&](const TruncatedSeries2& u) { return vt * u.partial_second() + (bt + cplx(-field.b0)) * u; };
    auto D = [&](const TruncatedSeries2& u) { return einv * u.partial_second().partial_first() * cplx(4.0); };
    std::vector<double> res;
    const auto& A = e.amplitudes;
    for (std::size_t n = 0; n < A.size(); ++n) {
        TruncatedSeries2 r = T(A[n]);
        if (n >= 1) {
            r -= A[n - 1] * cplx(e.mu[1]) + D(A[n - 1]);
            for (std::size_t j = 2; j <= n; ++j) r -= A[n - j] * cplx(e.mu[j]);
        }
        res.push_back(r.order() >= 0 ? r.max_abs() : 0.0);
    }
    return res;
}

}  // namespace magwkb
