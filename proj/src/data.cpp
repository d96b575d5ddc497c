#include "whw/data.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whw {

DataQuintuple DataQuintuple::zero() {
    auto z = [](double) { return Complex(0.0); };
    DataQuintuple y;
    y.f = z; y.g = z; y.h = z; y.ft = z; y.gt = z;
    return y;
}

void DataQuintuple::validate(double tol) const {
    double scale = 0.0;
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) scale = std::max(scale, std::abs(f(x)));
    for (double x : {2.0, 2.25, 2.5, 2.75, 3.0}) scale = std::max(scale, std::abs(ft(x)));
    scale = std::max(scale, 1.0);
    if (std::abs(f(0.0)) > tol * scale)
        throw std::invalid_argument("DataQuintuple: f(0) != 0");
    if (std::abs(ft(3.0)) > tol * scale)
        throw std::invalid_argument("DataQuintuple: ft(3) != 0");
}

ScalarFn cubic_interpolant(std::vector<double> xs, std::vector<Complex> vals) {
    const std::size_t n = xs.size();
    if (n < 2 || vals.size() != n)
        throw std::invalid_argument("cubic_interpolant: need >= 2 matching samples");
    // second derivatives of the natural spline (tridiagonal solve)
    std::vector<Complex> m(n, Complex(0.0));
    if (n > 2) {
        std::vector<double> a(n), b(n), c(n);
        std::vector<Complex> r(n);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = xs[i] - xs[i - 1], h1 = xs[i + 1] - xs[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            r[i] = (vals[i + 1] - vals[i]) / h1 - (vals[i] - vals[i - 1]) / h0;
        }
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m[i] = (r[i] - (i + 2 < n ? c[i] * m[i + 1] : Complex(0.0))) / b[i];
            if (i == 1) break;
        }
    }
    return [xs = std::move(xs), vals = std::move(vals), m = std::move(m)](double x) {
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin() - 1);
        if (i >= xs.size() - 1) i = xs.size() - 2;
        const double h = xs[i + 1] - xs[i];
        const double t1 = (xs[i + 1] - x) / h, t2 = (x - xs[i]) / h;
        return t1 * vals[i] + t2 * vals[i + 1] +
               ((t1 * t1 * t1 - t1) * m[i] + (t2 * t2 * t2 - t2) * m[i + 1]) * (h * h) / 6.0;
    };
}

} // namespace whw
