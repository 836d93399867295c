#include "magwkb/chebyshev.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace magwkb {

namespace {
// FFTW's planner is not thread-safe; execution of a plan is.
std::mutex fftw_planner_mutex;
}  // namespace

ChebyshevSeries::ChebyshevSeries(std::vector<real> coeffs, double length)
    : c_(std::move(coeffs)), length_(length) {
    if (!(length > 0)) throw std::invalid_argument("ChebyshevSeries: interval length must be positive");
    if (c_.empty()) c_.push_back(0.0);
}

std::vector<long double> chebyshev_lobatto_points(double length, int degree) {
    std::vector<long double> x(degree + 1);
    for (int k = 0; k <= degree; ++k)
        x[k] = 0.5L * length * (1.0L - std::cos(std::numbers::pi_v<long double> * k / degree));
    return x;
}

ChebyshevSeries ChebyshevSeries::interpolate(const std::function<real(real)>& f, double length, int degree) {
    if (degree < 1) throw std::invalid_argument("ChebyshevSeries::interpolate: degree must be >= 1");
    const auto x = chebyshev_lobatto_points(length, degree);
    // Samples at x_k = cos(pi k / n) on [-1,1], i.e. in decreasing order of rho.
    std::vector<real> in(degree + 1), out(degree + 1);
    for (int k = 0; k <= degree; ++k) in[k] = f(x[degree - k]);
    {
        fftwl_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex);
            plan = fftwl_plan_r2r_1d(degree + 1, in.data(), out.data(), FFTW_REDFT00, FFTW_ESTIMATE);
        }
        fftwl_execute(plan);
        std::lock_guard<std::mutex> lock(fftw_planner_mutex);
        fftwl_destroy_plan(plan);
    }
    std::vector<real> c(degree + 1);
    for (int j = 0; j <= degree; ++j) c[j] = out[j] / degree;
    c[0] *= 0.5L;
    c[degree] *= 0.5L;
    return ChebyshevSeries(std::move(c), length);
}

ChebyshevSeries::real ChebyshevSeries::operator()(real x) const {
    const real t = 2.0L * x / length_ - 1.0L;
    real b1 = 0, b2 = 0;
    for (int k = degree(); k >= 1; --k) {
        const real b0 = 2 * t * b1 - b2 + c_[k];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + c_[0];
}

ChebyshevSeries ChebyshevSeries::derivative() const {
    const int n = degree();
    if (n == 0) return ChebyshevSeries({0.0L}, length_);
    std::vector<real> d(n + 1, 0.0L);  // d[n] = d[n-1+2] = 0
    for (int k = n - 1; k >= 0; --k) d[k] = (k + 2 <= n ? d[k + 2] : 0.0L) + 2.0L * (k + 1) * c_[k + 1];
    d[0] *= 0.5L;
    d.pop_back();
    const real scale = 2.0L / length_;
    for (auto& v : d) v *= scale;
    return ChebyshevSeries(std::move(d), length_);
}

ChebyshevSeries ChebyshevSeries::integral() const {
    const int n = degree();
    std::vector<real> r(n + 2, 0.0L);
    auto c = [&](int k) { return (k >= 0 && k <= n) ? c_[k] : 0.0L; };
    for (int k = 1; k <= n + 1; ++k) {
        const real prev = (k == 1) ? 2.0L * c(0) : c(k - 1);
        r[k] = (prev - c(k + 1)) / (2.0L * k);
    }
    const real scale = 0.5L * length_;
    for (auto& v : r) v *= scale;
    ChebyshevSeries out(std::move(r), length_);
    out.c_[0] = -out(0.0L);
    return out;
}

ChebyshevSeries ChebyshevSeries::divided_by_x() const {
    const int n = degree();
    if (n == 0) return ChebyshevSeries({0.0L}, length_);
    // x = (L/2)(t + 1): divide by (t - r) with r = -1 using t T_k = (T_{k+1} + T_{k-1}) / 2.
    const real r = -1.0L;
    std::vector<real> b(n + 1, 0.0L);
    for (int j = n; j >= 1; --j) {
        const real next = j + 1 <= n - 1 ? b[j + 1] : 0.0L;
        const real cur = j <= n - 1 ? b[j] : 0.0L;
        b[j - 1] = (c_[j] + r * cur - 0.5L * next) * (j - 1 == 0 ? 1.0L : 2.0L);
    }
    b.pop_back();
    const real scale = 2.0L / length_;
    for (auto& v : b) v *= scale;
    return ChebyshevSeries(std::move(b), length_);
}

std::vector<ChebyshevSeries::real> ChebyshevSeries::taylor_at_zero(int count) const {
    std::vector<real> t;
    ChebyshevSeries d = *this;
    real factorial = 1.0L;
    for (int k = 0; k < count; ++k) {
        if (k > 0) factorial *= k;
        t.push_back(d(0.0L) / factorial);
        d = d.derivative();
    }
    return t;
}

ChebyshevSeries ChebyshevSeries::chopped(real tol) const {
    real m = 0;
    for (real v : c_) m = std::max(m, std::abs(v));
    int last = degree();
    while (last > 0 && std::abs(c_[last]) <= tol * m) --last;
    return ChebyshevSeries(std::vector<real>(c_.begin(), c_.begin() + last + 1), length_);
}

ChebyshevSeries ChebyshevSeries::denoised() const {
    real m = 0;
    for (real v : c_) m = std::max(m, std::abs(v));
    const int n = degree();
    if (n < 8 || m == 0) return chopped();
    std::vector<real> tail;
    for (int k = n - n / 4; k <= n; ++k) tail.push_back(std::abs(c_[k]));
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    const real floor = tail[tail.size() / 2];
    // An unresolved expansion has no plateau; keep it intact.
    if (floor > 1e-10L * m) return chopped();
    const real threshold = std::max(10 * floor, 1e-18L * m);
    int last = n;
    while (last > 0 && std::abs(c_[last]) <= threshold) --last;
    return ChebyshevSeries(std::vector<real>(c_.begin(), c_.begin() + last + 1), length_);
}

ChebyshevSeries ChebyshevSeries::operator+(const ChebyshevSeries& o) const {
    std::vector<real> r(std::max(c_.size(), o.c_.size()), 0.0L);
    for (std::size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
    return ChebyshevSeries(std::move(r), length_);
}

ChebyshevSeries ChebyshevSeries::operator-(const ChebyshevSeries& o) const { return *this + o * -1.0L; }

ChebyshevSeries ChebyshevSeries::operator*(real s) const {
    std::vector<real> r = c_;
    for (auto& v : r) v *= s;
    return ChebyshevSeries(std::move(r), length_);
}

}  // namespace magwkb
