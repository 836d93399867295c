#include "magwkb/radial_wkb.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace magwkb {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 20>;

// Composite Gauss-Legendre on [0, x] with panels of length <= 1.
template <class F>
double integrate_0_to(F&& f, double x) {
    if (x == 0) return 0;
    const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(x))));
    const double w = x / panels;
    double s = 0;
    for (int p = 0; p < panels; ++p) s += Gauss::integrate(f, p * w, (p + 1) * w);
    return s;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

// ------------------------------------------------------------------ RadialField

RadialField RadialField::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("radial field: beta polynomial is empty");
    while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
    RadialField f;
    f.poly_ = std::move(coeffs);
    return f;
}

RadialField RadialField::from_function(std::function<double(double)> beta, std::function<double(double)> beta_prime) {
    RadialField f;
    f.fn_ = std::move(beta);
    f.dfn_ = std::move(beta_prime);
    return f;
}

bool RadialField::is_constant() const {
    if (is_polynomial()) return poly_.size() == 1;
    for (double r : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0})
        if (dfn_(r) != 0.0) return false;
    return true;
}

double RadialField::beta(double rho) const { return is_polynomial() ? horner(poly_, rho) : fn_(rho); }

double RadialField::beta_prime(double rho) const {
    if (!is_polynomial()) return dfn_(rho);
    std::vector<double> d;
    for (std::size_t k = 1; k < poly_.size(); ++k) d.push_back(double(k) * poly_[k]);
    return horner(d, rho);
}

double RadialField::flux(double rho) const {
    if (is_polynomial()) {
        std::vector<double> a{0.0};
        for (std::size_t k = 0; k < poly_.size(); ++k) a.push_back(poly_[k] / double(k + 1));
        return horner(a, rho);
    }
    return integrate_0_to([this](double s) { return fn_(s); }, rho);
}

double RadialField::phase(double rho) const {
    if (is_polynomial()) {
        // a(t)/t = sum c_k t^k/(k+1)  =>  phi = 1/2 sum c_k rho^{k+1}/(k+1)^2.
        std::vector<double> p{0.0};
        for (std::size_t k = 0; k < poly_.size(); ++k) p.push_back(0.5 * poly_[k] / double((k + 1) * (k + 1)));
        return horner(p, rho);
    }
    // phi(rho) = 1/2 int_0^rho int_0^1 beta(xi tau) dxi dtau.
    auto inner = [this](double tau) { return Gauss::integrate([&](double xi) { return fn_(xi * tau); }, 0.0, 1.0); };
    return 0.5 * integrate_0_to(inner, rho);
}

double RadialField::phase_inverse(double target) const {
    if (target <= 0) return 0;
    double hi = 1.0;
    while (phase(hi) < target) {
        hi *= 2;
        if (hi > 1e8) throw std::runtime_error("phase_inverse: phase does not reach the target");
    }
    boost::uintmax_t iters = 200;
    auto r = boost::math::tools::bisect([&](double x) { return phase(x) - target; }, 0.0, hi,
                                        boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (r.first + r.second);
}

void RadialField::validate(double rho_check) const {
    const double b0 = beta0();
    if (!(b0 > 0)) throw std::invalid_argument("radial field: beta(0) > 0 required (field must not vanish)");
    if (is_constant()) return;
    if (!(beta_prime0() > 0))
        throw std::invalid_argument(
            "radial field: beta'(0) > 0 required (the field must increase strictly away from its minimum)");
    for (int k = 1; k <= 200; ++k) {
        const double r = rho_check * k / 200.0;
        if (!(beta(r) > b0))
            throw std::invalid_argument("radial field: beta(rho) > beta(0) required on the window; fails at rho = " +
                                        std::to_string(r));
    }
}

// --------------------------------------------------------------- RadialFunction

double RadialFunction::operator()(double rho) const {
    if (is_series()) return series().evaluate(rho).real();
    return static_cast<double>(grid()(rho));
}

double RadialFunction::derivative_at(double rho) const {
    if (is_series()) return series().derivative().evaluate(rho).real();
    return static_cast<double>(grid().derivative()(rho));
}

// ----------------------------------------------------------------------- cutoff

double cutoff_chi(double rho, double K) {
    const double x = rho - K;
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    const double g0 = std::exp(-1.0 / (1.0 - x));
    const double g1 = std::exp(-1.0 / x);
    return g0 / (g0 + g1);
}

double default_cutoff_K(const RadialField& field) {
    const double b0 = field.beta0();
    double rho_double = 4.0;  // fallback when beta never doubles (e.g. constant profile)
    if (!field.is_constant()) {
        double hi = 1e-3;
        while (hi < 1e6 && field.beta(hi) < 2 * b0) hi *= 2;
        if (hi < 1e6) {
            boost::uintmax_t iters = 200;
            auto r = boost::math::tools::bisect([&](double x) { return field.beta(x) - 2 * b0; }, 0.0, hi,
                                                boost::math::tools::eps_tolerance<double>(50), iters);
            rho_double = 0.5 * (r.first + r.second);
        }
    }
    return 2 * rho_double;
}

double default_rho_max(double cutoff_K) { return 4 * std::max(1.0, cutoff_K + 1); }

// ------------------------------------------------------------------- series mode

namespace {

TruncatedSeries1 poly_series(const std::vector<double>& c, int order) {
    TruncatedSeries1 s(order);
    for (int k = 0; k <= order && k < static_cast<int>(c.size()); ++k) s.at(k) = c[k];
    return s;
}

int auto_series_order(int J) { return std::max(24, 2 * J + 16); }

RadialWkbExpansion chain_series(const RadialField& field, int m, int J, int N) {
    if (!field.is_polynomial()) throw std::invalid_argument("series mode requires a polynomial beta");
    const double b0 = field.beta0();
    const TruncatedSeries1 beta = poly_series(field.coefficients(), N);
    const TruncatedSeries1 a = beta.integral();
    const TruncatedSeries1 den = (a * cplx(2.0)).divided_by_x();  // 2a/rho, a unit
    const TruncatedSeries1 den_inv = den.reciprocal();
    const TruncatedSeries1 F = (TruncatedSeries1::constant(b0, N) - beta).divided_by_x() * den_inv;
    const TruncatedSeries1 iF = F.integral();
    const TruncatedSeries1 E = exp(iF), Einv = exp(-iF);

    RadialWkbExpansion out;
    out.mode = RadialMode::series;
    out.m = m;
    TruncatedSeries1 phi(N + 1);
    for (int k = 0; k < static_cast<int>(field.coefficients().size()) && k + 1 <= N + 1; ++k)
        phi.at(k + 1) = 0.5 * field.coefficients()[k] / double((k + 1) * (k + 1));
    out.phi = RadialFunction(phi);

    const double c = 2.0 * m + 2.0;
    std::vector<TruncatedSeries1> amp{E};
    std::vector<double> mu{b0, -c * E[1].real()};
    for (int n = 0; n < J; ++n) {
        const TruncatedSeries1& an = amp[n];
        if (an.order() < 3)
            throw std::invalid_argument("series mode: requested J = " + std::to_string(J) +
                                        " exceeds the truncation budget");
        const TruncatedSeries1 d1 = an.derivative();
        TruncatedSeries1 num = d1 * cplx(c) + d1.derivative().shifted_up() * cplx(2.0);
        for (int j = 1; j <= n + 1; ++j) num += amp[n + 1 - j] * cplx(mu[j]);
        const TruncatedSeries1 g = num.divided_by_x() * den_inv;
        const TruncatedSeries1 next = E * (Einv * g).integral();
        amp.push_back(next);
        if (next.order() < 1) throw std::invalid_argument("series mode: truncation budget exhausted");
        mu.push_back(-c * next[1].real());
    }
    for (auto& s : amp) out.amplitudes.emplace_back(s);
    out.mu = mu;
    return out;
}

// --------------------------------------------------------------------- grid mode

using real = ChebyshevSeries::real;

// beta in extended precision when the field is a polynomial.
real beta_extended(const RadialField& field, real r) {
    if (!field.is_polynomial()) return field.beta(static_cast<double>(r));
    const auto& c = field.coefficients();
    real v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * r + *it;
    return v;
}

// Chebyshev interpolant of num/den where both vanish (simply) at rho = 0:
// the common factor rho is divided out exactly before the pointwise quotient.
ChebyshevSeries smooth_quotient(const ChebyshevSeries& num, const ChebyshevSeries& den, int degree) {
    const ChebyshevSeries n = num.divided_by_x();
    const ChebyshevSeries d = den.divided_by_x();
    return ChebyshevSeries::interpolate([&](real r) { return n(r) / d(r); }, num.length(), degree).denoised();
}

struct GridWeights {
    ChebyshevSeries a, den, E, Einv;
};

GridWeights grid_weights(const RadialField& field, double L, int degree) {
    const real b0 = beta_extended(field, 0);
    const ChebyshevSeries beta =
        ChebyshevSeries::interpolate([&](real r) { return beta_extended(field, r); }, L, degree).denoised();
    GridWeights w;
    w.a = beta.integral();
    w.den = w.a * 2.0L;
    const ChebyshevSeries F = smooth_quotient(
        ChebyshevSeries::interpolate([&](real r) { return b0 - beta(r); }, L, degree).denoised(), w.den, degree);
    const ChebyshevSeries iF = F.integral();
    w.E = ChebyshevSeries::interpolate([&](real r) { return std::exp(iF(r)); }, L, degree).denoised();
    w.Einv = ChebyshevSeries::interpolate([&](real r) { return std::exp(-iF(r)); }, L, degree).denoised();
    return w;
}

RadialWkbExpansion chain_grid(const RadialField& field, int m, int J, double L, int degree) {
    const GridWeights w = grid_weights(field, L, degree);
    for (int k = 1; k <= 400; ++k)
        if (!(w.a(L * k / 400.0L) > 0)) throw std::invalid_argument("grid mode: a(rho) vanishes away from 0");

    RadialWkbExpansion out;
    out.mode = RadialMode::grid;
    out.m = m;
    const ChebyshevSeries a_over_rho = w.a.divided_by_x();
    out.phi = RadialFunction((a_over_rho.integral() * 0.5L).chopped());

    const real c = 2.0L * m + 2.0L;
    std::vector<ChebyshevSeries> amp{w.E};
    std::vector<real> mu{beta_extended(field, 0), -c * w.E.derivative()(0.0L)};
    for (int n = 0; n < J; ++n) {
        const ChebyshevSeries d1 = amp[n].derivative();
        const ChebyshevSeries d2 = d1.derivative();
        auto num_fn = [&](real r) {
            real v = c * d1(r) + 2 * r * d2(r);
            for (int j = 1; j <= n + 1; ++j) v += mu[j] * amp[n + 1 - j](r);
            return v;
        };
        const ChebyshevSeries g =
            smooth_quotient(ChebyshevSeries::interpolate(num_fn, L, degree).denoised(), w.den, degree);
        const ChebyshevSeries inner =
            ChebyshevSeries::interpolate([&](real r) { return w.Einv(r) * g(r); }, L, degree).denoised().integral();
        const ChebyshevSeries next =
            ChebyshevSeries::interpolate([&](real r) { return w.E(r) * inner(r); }, L, degree).denoised();
        amp.push_back(next);
        mu.push_back(-c * next.derivative()(0.0L));
    }
    for (auto& s : amp) out.amplitudes.emplace_back(s);
    out.mu.assign(mu.begin(), mu.end());
    return out;
}

int auto_cheb_degree(const RadialField& field, double L) {
    // Grow the degree until exp(int F) (the leading amplitude) is resolved
    // with ample headroom.
    for (int deg = 64; deg <= 2048; deg *= 2) {
        const ChebyshevSeries E = grid_weights(field, L, deg).E;
        if (E.degree() < deg / 2) return std::max(96, 2 * E.degree());
    }
    return 2048;
}

}  // namespace

RadialFunction eikonal_phi(const RadialField& field, const RadialChainOptions& opts) {
    if (opts.mode == RadialMode::series) {
        if (!field.is_polynomial()) throw std::invalid_argument("series mode requires a polynomial beta");
        const int N = opts.series_order > 0 ? opts.series_order : auto_series_order(0);
        TruncatedSeries1 phi(N);
        const auto& c = field.coefficients();
        for (int k = 0; k < static_cast<int>(c.size()) && k + 1 <= N; ++k)
            phi.at(k + 1) = 0.5 * c[k] / double((k + 1) * (k + 1));
        return RadialFunction(phi);
    }
    const double K = opts.cutoff_K > 0 ? opts.cutoff_K : default_cutoff_K(field);
    const double L = opts.rho_max > 0 ? opts.rho_max : default_rho_max(K);
    const int deg = opts.cheb_degree > 0 ? opts.cheb_degree : auto_cheb_degree(field, L);
    return chain_grid(field, 0, 0, L, deg).phi;
}

RadialWkbExpansion transport_chain(const RadialField& field, int m, int J, const RadialChainOptions& opts) {
    if (m < 0) throw std::invalid_argument("transport_chain: m must be nonnegative");
    if (J < 0) throw std::invalid_argument("transport_chain: J must be nonnegative");
    const double K = opts.cutoff_K > 0 ? opts.cutoff_K : default_cutoff_K(field);
    const double L = opts.rho_max > 0 ? opts.rho_max : default_rho_max(K);
    RadialWkbExpansion out;
    if (opts.mode == RadialMode::series) {
        field.validate(1.0);
        out = chain_series(field, m, J, opts.series_order > 0 ? opts.series_order : auto_series_order(J));
    } else {
        if (!(L > K + 1)) throw std::invalid_argument("transport_chain: window must extend beyond cutoff_K + 1");
        field.validate(L);
        const int deg = opts.cheb_degree > 0 ? opts.cheb_degree : auto_cheb_degree(field, L);
        out = chain_grid(field, m, J, L, deg);
    }
    out.cutoff_K = K;
    out.rho_max = L;
    return out;
}

// --------------------------------------------------------------------- assembly

std::vector<double> FiberSamples::values() const {
    std::vector<double> v(prefactor.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = prefactor[i] == 0 ? 0.0 : prefactor[i] * std::exp(-exponent[i]);
    return v;
}

namespace {

double amplitude_sum(const RadialWkbExpansion& e, double h, double rho) {
    double s = 0, hp = 1;
    for (const auto& a : e.amplitudes) {
        s += a(rho) * hp;
        hp *= h;
    }
    return s;
}

}  // namespace

FiberSamples assemble_fiber_ansatz(const RadialWkbExpansion& e, double h, const std::vector<double>& rho) {
    if (!(h > 0)) throw std::invalid_argument("assemble_ansatz: h must be positive");
    FiberSamples out;
    out.prefactor.resize(rho.size());
    out.exponent.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double r = rho[i];
        const double chi = cutoff_chi(r, e.cutoff_K);
        if (chi == 0.0) {
            out.prefactor[i] = 0;
            out.exponent[i] = 0;
            continue;
        }
        out.prefactor[i] = chi * std::pow(r, 0.5 * e.m) * amplitude_sum(e, h, r);
        out.exponent[i] = e.phi(r) / h;
    }
    return out;
}

std::vector<cplx> assemble_plane_ansatz(const RadialWkbExpansion& e, double h, const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
    if (!(h > 0)) throw std::invalid_argument("assemble_ansatz: h must be positive");
    std::vector<cplx> out;
    out.reserve(xs.size() * ys.size());
    for (double y : ys)
        for (double x : xs) {
            const double r = 0.5 * (x * x + y * y);
            const double chi = cutoff_chi(r, e.cutoff_K);
            if (chi == 0.0) {
                out.emplace_back(0.0, 0.0);
                continue;
            }
            const double mag = chi * std::pow(r, 0.5 * e.m) * std::exp(-e.phi(r) / h) * amplitude_sum(e, h, r);
            out.push_back(std::polar(1.0, e.m * std::atan2(y, x)) * mag);
        }
    return out;
}

}  // namespace magwkb
