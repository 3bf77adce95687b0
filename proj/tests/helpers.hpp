// Test-side reference implementations, written independently of src/ so the
// library is checked against something it does not share code with:
//   - normal tail quantile by bisection on std::erfc
//   - arcsine-law CDF by adaptive Simpson quadrature (singularity removed
//     by substitution)
//   - cube-walk return probability by dense distribution evolution
//   - two-sample Kolmogorov-Smirnov statistic
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace testref {

// Standard normal CDF via erfc (relative error ~1e-15 in the tail).
inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double phi_upper(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Upper-tail quantile: the x with phi_upper(x) = p, by plain bisection.
inline double q_upper(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_upper: p in (0,1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (phi_upper(mid) > p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Adaptive Simpson on [a, b].
inline double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// (sin(a pi)/pi) Int_0^u (1-x)^{-a} x^{a-1} dx with the x = y^{1/a}
// substitution, which turns x^{a-1} dx into dy/a and removes the x=0
// singularity. For u > 1/2 integrate the mirrored tail instead (the same law
// with exponent 1-a), keeping the integrand bounded.
inline double asl_raw(double a, double u) {
    if (u <= 0.0) return 0.0;
    const double top = std::pow(u, a);
    auto g = [a](double y) {
        const double x = std::pow(y, 1.0 / a);
        return std::pow(1.0 - x, -a);
    };
    const double integral = integrate(g, 0.0, top, 1e-13) / a;
    return std::sin(a * M_PI) / M_PI * integral;
}

inline double asl_quadrature(double alpha, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    if (u <= 0.5) return asl_raw(alpha, u);
    return 1.0 - asl_raw(1.0 - alpha, 1.0 - u);
}

// Return probability of the simple random walk on the n-cube after l steps,
// by dense evolution of the distribution vector (n <= 12).
inline double dense_return(int n, int l) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> cur(size, 0.0), nxt(size, 0.0);
    cur[0] = 1.0;
    for (int step = 0; step < l; ++step) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (std::size_t x = 0; x < size; ++x) {
            if (cur[x] == 0.0) continue;
            const double w = cur[x] / n;
            for (int b = 0; b < n; ++b) nxt[x ^ (std::size_t{1} << b)] += w;
        }
        cur.swap(nxt);
    }
    return cur[0];
}

// Two-sample KS statistic on already-drawn samples.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

// 1% critical value of the two-sample KS test with equal sample sizes N.
inline double ks_critical_1pct(std::size_t n) {
    return 1.628 * std::sqrt(2.0 / static_cast<double>(n));
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace testref
