#pragma once

#include <array>
#include <complex>
#include <vector>

namespace magwkb {

using cplx = std::complex<double>;

// Power series in one variable, known exactly through degree order().
class TruncatedSeries1 {
public:
    TruncatedSeries1() = default;
    explicit TruncatedSeries1(int order);
    explicit TruncatedSeries1(std::vector<cplx> coeffs);

    static TruncatedSeries1 constant(cplx c, int order);
    static TruncatedSeries1 variable(int order);  // the series "x"

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }

    // Coefficient access; reads beyond the order return zero.
    cplx operator[](int k) const { return (k >= 0 && k <= order()) ? c_[k] : cplx{}; }
    cplx& at(int k) { return c_.at(k); }

    TruncatedSeries1 truncated(int order) const;
    TruncatedSeries1 derivative() const;
    // Antiderivative vanishing at 0; the result is known through order()+1.
    TruncatedSeries1 integral() const;
    // Division of a series with vanishing constant term by x (order drops by one).
    TruncatedSeries1 divided_by_x() const;
    TruncatedSeries1 shifted_up() const;  // multiplication by x, order grows by one
    TruncatedSeries1 reciprocal() const;  // requires nonzero constant term
    cplx evaluate(cplx x) const;
    double max_abs() const;

    TruncatedSeries1& operator+=(const TruncatedSeries1& o);
    TruncatedSeries1& operator-=(const TruncatedSeries1& o);
    TruncatedSeries1& operator*=(cplx s);

private:
    std::vector<cplx> c_;
};

TruncatedSeries1 operator+(const TruncatedSeries1& a, const TruncatedSeries1& b);
TruncatedSeries1 operator-(const TruncatedSeries1& a, const TruncatedSeries1& b);
TruncatedSeries1 operator-(const TruncatedSeries1& a);
TruncatedSeries1 operator*(const TruncatedSeries1& a, const TruncatedSeries1& b);
TruncatedSeries1 operator*(const TruncatedSeries1& a, cplx s);
TruncatedSeries1 operator*(cplx s, const TruncatedSeries1& a);
TruncatedSeries1 operator+(const TruncatedSeries1& a, cplx s);
TruncatedSeries1 series_mul(const TruncatedSeries1& a, const TruncatedSeries1& b);
TruncatedSeries1 exp(const TruncatedSeries1& a);

// Power series in two variables, truncated at total degree order():
// only coefficients (m,n) with m+n <= order() are stored.
class TruncatedSeries2 {
public:
    TruncatedSeries2() = default;
    explicit TruncatedSeries2(int order);

    static TruncatedSeries2 constant(cplx c, int order);
    static TruncatedSeries2 first_variable(int order);   // z (or q1, s)
    static TruncatedSeries2 second_variable(int order);  // w (or q2, t, y)
    // Embed a one-variable series as a function of the first (or second) variable.
    static TruncatedSeries2 from_first(const TruncatedSeries1& s, int order);
    static TruncatedSeries2 from_second(const TruncatedSeries1& s, int order);

    int order() const { return n_; }

    cplx operator()(int m, int n) const;  // zero outside the stored triangle
    cplx& at(int m, int n);               // throws outside the stored triangle

    // Coefficient of second-variable^n as a series in the first variable.
    TruncatedSeries1 column(int n) const;
    // Coefficient of first-variable^m as a series in the second variable.
    TruncatedSeries1 row(int m) const;
    void set_column(int n, const TruncatedSeries1& s);

    TruncatedSeries2 truncated(int order) const;
    TruncatedSeries2 partial_first() const;
    TruncatedSeries2 partial_second() const;
    cplx evaluate(cplx x, cplx y) const;
    double max_abs() const;

    // Reality test: the series is a real function of (q1,q2) in (z,w) form
    // iff c(m,n) == conj(c(n,m)) for all stored (m,n).
    bool is_real_function(double tol = 1e-12) const;

    TruncatedSeries2& operator+=(const TruncatedSeries2& o);
    TruncatedSeries2& operator-=(const TruncatedSeries2& o);
    TruncatedSeries2& operator*=(cplx s);

private:
    int index(int m, int n) const { return m * (n_ + 1) + n; }
    int n_ = -1;
    std::vector<cplx> c_;  // (n_+1)^2 slots, only the triangle m+n<=n_ is used
};

TruncatedSeries2 operator+(const TruncatedSeries2& a, const TruncatedSeries2& b);
TruncatedSeries2 operator-(const TruncatedSeries2& a, const TruncatedSeries2& b);
TruncatedSeries2 operator-(const TruncatedSeries2& a);
TruncatedSeries2 operator*(const TruncatedSeries2& a, const TruncatedSeries2& b);
TruncatedSeries2 operator*(const TruncatedSeries2& a, cplx s);
TruncatedSeries2 operator*(cplx s, const TruncatedSeries2& a);
TruncatedSeries2 operator+(const TruncatedSeries2& a, cplx s);
TruncatedSeries2 series_mul(const TruncatedSeries2& a, const TruncatedSeries2& b);
TruncatedSeries2 exp(const TruncatedSeries2& a);

enum class Variable { first, second };
TruncatedSeries2 partial(const TruncatedSeries2& s, Variable v);

// Linear change of variables: returns S(m00*x + m01*y, m10*x + m11*y).
TruncatedSeries2 linear_substitute(const TruncatedSeries2& s,
                                   const std::array<std::array<cplx, 2>, 2>& m);

// Taylor data in (q1,q2) -> series in (z,w) via q1=(z+w)/2, q2=(z-w)/(2i).
TruncatedSeries2 complexify(const TruncatedSeries2& taylor_q);
// Inverse of complexify: z = q1 + i q2, w = q1 - i q2.
TruncatedSeries2 realify(const TruncatedSeries2& taylor_zw);

// S(z, w(z)); requires w(0) = 0. The result has order min(S, w).
TruncatedSeries1 substitute_curve(const TruncatedSeries2& s, const TruncatedSeries1& w_of_z);
// S(z, y + w(z)) as a series in (z, y); requires w(0) = 0.
TruncatedSeries2 shift_variable(const TruncatedSeries2& s, const TruncatedSeries1& w_of_z);

}  // namespace magwkb
