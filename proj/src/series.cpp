#include "magwkb/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace magwkb {

// ---------------------------------------------------------------- one variable

TruncatedSeries1::TruncatedSeries1(int order) : c_(std::max(order, -1) + 1) {}

TruncatedSeries1::TruncatedSeries1(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}

TruncatedSeries1 TruncatedSeries1::constant(cplx c, int order) {
    TruncatedSeries1 s(order);
    if (order >= 0) s.c_[0] = c;
    return s;
}

TruncatedSeries1 TruncatedSeries1::variable(int order) {
    TruncatedSeries1 s(order);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
}

TruncatedSeries1 TruncatedSeries1::truncated(int order) const {
    if (order > this->order())
        throw std::invalid_argument("truncated: cannot raise the order of a series");
    return TruncatedSeries1(std::vector<cplx>(c_.begin(), c_.begin() + (order + 1)));
}

TruncatedSeries1 TruncatedSeries1::derivative() const {
    TruncatedSeries1 r(order() - 1);
    for (int k = 0; k <= r.order(); ++k) r.c_[k] = double(k + 1) * c_[k + 1];
    return r;
}

TruncatedSeries1 TruncatedSeries1::integral() const {
    TruncatedSeries1 r(order() + 1);
    for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / double(k + 1);
    return r;
}

TruncatedSeries1 TruncatedSeries1::divided_by_x() const {
    TruncatedSeries1 r(order() - 1);
    for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k + 1];
    return r;
}

TruncatedSeries1 TruncatedSeries1::shifted_up() const {
    TruncatedSeries1 r(order() + 1);
    for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k];
    return r;
}

TruncatedSeries1 TruncatedSeries1::reciprocal() const {
    if (order() < 0 || c_[0] == cplx{})
        throw std::invalid_argument("reciprocal: constant term must be nonzero");
    TruncatedSeries1 r(order());
    r.c_[0] = 1.0 / c_[0];
    for (int k = 1; k <= order(); ++k) {
        cplx acc{};
        for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
        r.c_[k] = -acc / c_[0];
    }
    return r;
}

cplx TruncatedSeries1::evaluate(cplx x) const {
    cplx acc{};
    for (int k = order(); k >= 0; --k) acc = acc * x + c_[k];
    return acc;
}

double TruncatedSeries1::max_abs() const {
    double m = 0;
    for (auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

TruncatedSeries1& TruncatedSeries1::operator+=(const TruncatedSeries1& o) {
    c_.resize(std::min(order(), o.order()) + 1);
    for (int k = 0; k <= order(); ++k) c_[k] += o.c_[k];
    return *this;
}

TruncatedSeries1& TruncatedSeries1::operator-=(const TruncatedSeries1& o) {
    c_.resize(std::min(order(), o.order()) + 1);
    for (int k = 0; k <= order(); ++k) c_[k] -= o.c_[k];
    return *this;
}

TruncatedSeries1& TruncatedSeries1::operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
}

TruncatedSeries1 operator+(const TruncatedSeries1& a, const TruncatedSeries1& b) {
    TruncatedSeries1 r = a;
    return r += b;
}

TruncatedSeries1 operator-(const TruncatedSeries1& a, const TruncatedSeries1& b) {
    TruncatedSeries1 r = a;
    return r -= b;
}

TruncatedSeries1 operator-(const TruncatedSeries1& a) { return a * cplx(-1.0); }

TruncatedSeries1 operator*(const TruncatedSeries1& a, cplx s) {
    TruncatedSeries1 r = a;
    return r *= s;
}

TruncatedSeries1 operator*(cplx s, const TruncatedSeries1& a) { return a * s; }

TruncatedSeries1 operator+(const TruncatedSeries1& a, cplx s) {
    TruncatedSeries1 r = a;
    if (r.order() >= 0) r.at(0) += s;
    return r;
}

TruncatedSeries1 series_mul(const TruncatedSeries1& a, const TruncatedSeries1& b) {
    const int n = std::min(a.order(), b.order());
    TruncatedSeries1 r(n);
    for (int i = 0; i <= n; ++i) {
        if (a[i] == cplx{}) continue;
        for (int j = 0; i + j <= n; ++j) r.at(i + j) += a[i] * b[j];
    }
    return r;
}

TruncatedSeries1 operator*(const TruncatedSeries1& a, const TruncatedSeries1& b) {
    return series_mul(a, b);
}

TruncatedSeries1 exp(const TruncatedSeries1& a) {
    // Euler recursion from x E' = E * x A': k e_k = sum_j j a_j e_{k-j}.
    const int n = a.order();
    TruncatedSeries1 e(n);
    if (n < 0) return e;
    e.at(0) = std::exp(a[0]);
    for (int k = 1; k <= n; ++k) {
        cplx acc{};
        for (int j = 1; j <= k; ++j) acc += double(j) * a[j] * e[k - j];
        e.at(k) = acc / double(k);
    }
    return e;
}

// ---------------------------------------------------------------- two variables

TruncatedSeries2::TruncatedSeries2(int order)
    : n_(std::max(order, -1)), c_(std::size_t(n_ + 1) * std::size_t(n_ + 1)) {}

TruncatedSeries2 TruncatedSeries2::constant(cplx c, int order) {
    TruncatedSeries2 s(order);
    if (order >= 0) s.at(0, 0) = c;
    return s;
}

TruncatedSeries2 TruncatedSeries2::first_variable(int order) {
    TruncatedSeries2 s(order);
    if (order >= 1) s.at(1, 0) = 1.0;
    return s;
}

TruncatedSeries2 TruncatedSeries2::second_variable(int order) {
    TruncatedSeries2 s(order);
    if (order >= 1) s.at(0, 1) = 1.0;
    return s;
}

TruncatedSeries2 TruncatedSeries2::from_first(const TruncatedSeries1& s, int order) {
    if (order > s.order()) throw std::invalid_argument("from_first: order exceeds the series order");
    TruncatedSeries2 r(order);
    for (int m = 0; m <= order; ++m) r.at(m, 0) = s[m];
    return r;
}

TruncatedSeries2 TruncatedSeries2::from_second(const TruncatedSeries1& s, int order) {
    if (order > s.order()) throw std::invalid_argument("from_second: order exceeds the series order");
    TruncatedSeries2 r(order);
    for (int n = 0; n <= order; ++n) r.at(0, n) = s[n];
    return r;
}

cplx TruncatedSeries2::operator()(int m, int n) const {
    if (m < 0 || n < 0 || m + n > n_) return {};
    return c_[index(m, n)];
}

cplx& TruncatedSeries2::at(int m, int n) {
    if (m < 0 || n < 0 || m + n > n_) throw std::out_of_range("TruncatedSeries2: index beyond the total degree");
    return c_[index(m, n)];
}

TruncatedSeries1 TruncatedSeries2::column(int n) const {
    TruncatedSeries1 r(n_ - n);
    for (int m = 0; m <= r.order(); ++m) r.at(m) = (*this)(m, n);
    return r;
}

TruncatedSeries1 TruncatedSeries2::row(int m) const {
    TruncatedSeries1 r(n_ - m);
    for (int n = 0; n <= r.order(); ++n) r.at(n) = (*this)(m, n);
    return r;
}

void TruncatedSeries2::set_column(int n, const TruncatedSeries1& s) {
    for (int m = 0; m + n <= n_; ++m) at(m, n) = s[m];
}

TruncatedSeries2 TruncatedSeries2::truncated(int order) const {
    if (order > n_) throw std::invalid_argument("truncated: cannot raise the order of a series");
    TruncatedSeries2 r(order);
    for (int m = 0; m <= order; ++m)
        for (int n = 0; m + n <= order; ++n) r.at(m, n) = (*this)(m, n);
    return r;
}

TruncatedSeries2 TruncatedSeries2::partial_first() const {
    TruncatedSeries2 r(n_ - 1);
    for (int m = 0; m <= r.n_; ++m)
        for (int n = 0; m + n <= r.n_; ++n) r.at(m, n) = double(m + 1) * (*this)(m + 1, n);
    return r;
}

TruncatedSeries2 TruncatedSeries2::partial_second() const {
    TruncatedSeries2 r(n_ - 1);
    for (int m = 0; m <= r.n_; ++m)
        for (int n = 0; m + n <= r.n_; ++n) r.at(m, n) = double(n + 1) * (*this)(m, n + 1);
    return r;
}

cplx TruncatedSeries2::evaluate(cplx x, cplx y) const {
    cplx acc{};
    for (int n = n_; n >= 0; --n) acc = acc * y + column(n).evaluate(x);
    return acc;
}

double TruncatedSeries2::max_abs() const {
    double r = 0;
    for (auto& v : c_) r = std::max(r, std::abs(v));
    return r;
}

bool TruncatedSeries2::is_real_function(double tol) const {
    const double scale = std::max(1.0, max_abs());
    for (int m = 0; m <= n_; ++m)
        for (int n = 0; m + n <= n_; ++n)
            if (std::abs((*this)(m, n) - std::conj((*this)(n, m))) > tol * scale) return false;
    return true;
}

TruncatedSeries2& TruncatedSeries2::operator+=(const TruncatedSeries2& o) {
    if (o.n_ < n_) *this = truncated(o.n_);
    for (int m = 0; m <= n_; ++m)
        for (int n = 0; m + n <= n_; ++n) at(m, n) += o(m, n);
    return *this;
}

TruncatedSeries2& TruncatedSeries2::operator-=(const TruncatedSeries2& o) {
    if (o.n_ < n_) *this = truncated(o.n_);
    for (int m = 0; m <= n_; ++m)
        for (int n = 0; m + n <= n_; ++n) at(m, n) -= o(m, n);
    return *this;
}

TruncatedSeries2& TruncatedSeries2::operator*=(cplx s) {
    for (auto& v : c_) v *= s;
    return *this;
}

TruncatedSeries2 operator+(const TruncatedSeries2& a, const TruncatedSeries2& b) {
    TruncatedSeries2 r = a;
    return r += b;
}

TruncatedSeries2 operator-(const TruncatedSeries2& a, const TruncatedSeries2& b) {
    TruncatedSeries2 r = a;
    return r -= b;
}

TruncatedSeries2 operator-(const TruncatedSeries2& a) { return a * cplx(-1.0); }

TruncatedSeries2 operator*(const TruncatedSeries2& a, cplx s) {
    TruncatedSeries2 r = a;
    return r *= s;
}

TruncatedSeries2 operator*(cplx s, const TruncatedSeries2& a) { return a * s; }

TruncatedSeries2 operator+(const TruncatedSeries2& a, cplx s) {
    TruncatedSeries2 r = a;
    if (r.order() >= 0) r.at(0, 0) += s;
    return r;
}

TruncatedSeries2 series_mul(const TruncatedSeries2& a, const TruncatedSeries2& b) {
    const int N = std::min(a.order(), b.order());
    TruncatedSeries2 r(N);
    for (int i = 0; i <= N; ++i)
        for (int j = 0; i + j <= N; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (int k = 0; i + j + k <= N; ++k)
                for (int l = 0; i + j + k + l <= N; ++l) r.at(i + k, j + l) += aij * b(k, l);
        }
    return r;
}

TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b) {
    return series_mul(a, b);
}

TruncatedSeries2 exp(const TruncatedSeries2& a) {
    // Total-degree Euler recursion: (m+n) e_mn = sum (i+j) a_ij e_{m-i,n-j}.
    const int N = a.order();
    TruncatedSeries2 e(N);
    if (N < 0) return e;
    e.at(0, 0) = std::exp(a(0, 0));
    for (int d = 1; d <= N; ++d)
        for (int m = 0; m <= d; ++m) {
            const int n = d - m;
            cplx acc{};
            for (int i = 0; i <= m; ++i)
                for (int j = 0; j <= n; ++j)
                    if (i + j > 0) acc += double(i + j) * a(i, j) * e(m - i, n - j);
            e.at(m, n) = acc / double(d);
        }
    return e;
}

TruncatedSeries2 partial(const TruncatedSeries2& s, Variable v) {
    return v == Variable::first ? s.partial_first() : s.partial_second();
}

TruncatedSeries2 linear_substitute(const TruncatedSeries2& s,
                                   const std::array<std::array<cplx, 2>, 2>& mat) {
    const int N = s.order();
    TruncatedSeries2 u(N), v(N);
    if (N >= 1) {
        u.at(1, 0) = mat[0][0];
        u.at(0, 1) = mat[0][1];
        v.at(1, 0) = mat[1][0];
        v.at(0, 1) = mat[1][1];
    }
    std::vector<TruncatedSeries2> upow{TruncatedSeries2::constant(1.0, N)};
    std::vector<TruncatedSeries2> vpow{TruncatedSeries2::constant(1.0, N)};
    for (int k = 1; k <= N; ++k) {
        upow.push_back(upow.back() * u);
        vpow.push_back(vpow.back() * v);
    }
    TruncatedSeries2 r(N);
    for (int a = 0; a <= N; ++a)
        for (int b = 0; a + b <= N; ++b) {
            const cplx c = s(a, b);
            if (c == cplx{}) continue;
            r += (upow[a] * vpow[b]) * c;
        }
    return r;
}

TruncatedSeries2 complexify(const TruncatedSeries2& taylor_q) {
    const cplx half(0.5, 0.0), ihalf(0.0, 0.5);
    return linear_substitute(taylor_q, {{{half, half}, {-ihalf, ihalf}}});
}

TruncatedSeries2 realify(const TruncatedSeries2& taylor_zw) {
    const cplx one(1.0, 0.0), i(0.0, 1.0);
    return linear_substitute(taylor_zw, {{{one, i}, {one, -i}}});
}

namespace {

void require_no_constant(const TruncatedSeries1& w) {
    if (w.order() >= 0 && w[0] != cplx{})
        throw std::invalid_argument("curve substitution requires w(0) = 0");
}

// Powers w^k, k = 0..count-1, each at the given order.
std::vector<TruncatedSeries1> powers(const TruncatedSeries1& w, int order, int count) {
    const TruncatedSeries1 wt = w.truncated(order);
    std::vector<TruncatedSeries1> p{TruncatedSeries1::constant(1.0, order)};
    for (int k = 1; k < count; ++k) p.push_back(p.back() * wt);
    return p;
}

// Coefficients of a column padded with zeros; exact when multiplied by a
// series whose valuation makes the missing coefficients irrelevant.
TruncatedSeries1 padded(const TruncatedSeries1& s, int order) {
    TruncatedSeries1 r(order);
    for (int k = 0; k <= std::min(order, s.order()); ++k) r.at(k) = s[k];
    return r;
}

}  // namespace

TruncatedSeries1 substitute_curve(const TruncatedSeries2& s, const TruncatedSeries1& w_of_z) {
    require_no_constant(w_of_z);
    const int R = std::min(s.order(), w_of_z.order());
    const auto wp = powers(w_of_z, R, R + 1);
    TruncatedSeries1 r(R);
    for (int n = 0; n <= R; ++n) r += padded(s.column(n), R) * wp[n];
    return r;
}

TruncatedSeries2 shift_variable(const TruncatedSeries2& s, const TruncatedSeries1& w_of_z) {
    require_no_constant(w_of_z);
    const int R = std::min(s.order(), w_of_z.order());
    const auto wp = powers(w_of_z, R, R + 1);
    TruncatedSeries2 r(R);
    for (int k = 0; k <= R; ++k) {
        TruncatedSeries1 col(R - k);
        double binom = 1.0;  // C(n, k), starting at n = k
        for (int n = k; n <= R; ++n) {
            col += padded(s.column(n), R - k) * wp[n - k].truncated(R - k) * cplx(binom);
            binom = binom * double(n + 1) / double(n + 1 - k);
        }
        r.set_column(k, col);
    }
    return r;
}

}  // namespace magwkb
