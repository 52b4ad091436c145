#include "polariton/divided_difference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace polariton {

using cplx = std::complex<double>;

cplx expm1_complex(cplx z) {
    const double a = z.real();
    const double b = z.imag();
    const double s = std::sin(0.5 * b);
    const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
    const double im = std::exp(a) * std::sin(b);
    return {re, im};
}

namespace {

// (e^d − 1)/d
cplx phi1(cplx d) {
    if (std::abs(d) < 1e-300) return 1.0;
    if (std::abs(d) < 1e-5) return 1.0 + d * (0.5 + d / 6.0);
    return expm1_complex(d) / d;
}

// exp[y0, y1]
cplx dd1(cplx y0, cplx y1) { return std::exp(y0) * phi1(y1 - y0); }

// exp[y0, y1, y2] as e^c Σ_{n≥2} h_{n−2}(z)/n!, z = y − c.
cplx dd2_series(const std::array<cplx, 3>& y) {
    const cplx c = (y[0] + y[1] + y[2]) / 3.0;
    const std::array<cplx, 3> z{y[0] - c, y[1] - c, y[2] - c};
    constexpr int kTerms = 30;
    // h1[k] = h_k(z0), h2[k] = h_k(z0, z1), h3[k] = h_k(z0, z1, z2)
    std::array<cplx, kTerms> h1{}, h2{}, h3{};
    h1[0] = h2[0] = h3[0] = 1.0;
    for (int k = 1; k < kTerms; ++k) {
        h1[k] = h1[k - 1] * z[0];
        h2[k] = h1[k] + z[1] * h2[k - 1];
        h3[k] = h2[k] + z[2] * h3[k - 1];
    }
    cplx sum = 0.0;
    double inv_factorial = 0.5; // 1/2!
    for (int n = 2; n < kTerms + 2; ++n) {
        sum += h3[n - 2] * inv_factorial;
        inv_factorial /= static_cast<double>(n + 1);
    }
    return std::exp(c) * sum;
}

cplx dd2(const std::array<cplx, 3>& y) {
    const cplx c = (y[0] + y[1] + y[2]) / 3.0;
    double spread = 0.0;
    for (const auto& v : y) spread = std::max(spread, std::abs(v - c));
    if (spread <= 1.0) return dd2_series(y);
    // Divide across the most separated pair.
    std::array<int, 3> best{0, 1, 2};
    double sep = -1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            const double d = std::abs(y[i] - y[j]);
            if (d > sep) {
                sep = d;
                best = {i, j, 3 - i - j};
            }
        }
    }
    const cplx yi = y[best[0]], yj = y[best[1]], yk = y[best[2]];
    return (dd1(yi, yk) - dd1(yj, yk)) / (yi - yj);
}

} // namespace

cplx exp_divided_difference(cplx x0, cplx x1, double t) { return t * dd1(x0 * t, x1 * t); }

cplx exp_divided_difference(cplx x0, cplx x1, cplx x2, double t) {
    if (t == 0.0) return 0.0;
    return t * t * dd2({x0 * t, x1 * t, x2 * t});
}

} // namespace polariton
