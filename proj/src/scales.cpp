#include "remdyn/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "remdyn/normal.hpp"

namespace remdyn {

namespace {
constexpr double kLog2 = 0.6931471805599453094;
constexpr double kLogSqrt2Pi = 0.9189385332046727418;
}  // namespace

double beta_c(double eps) {
    if (!(eps > 0.0) || !(eps <= 1.0)) {
        throw validation_error("beta_c: eps must lie in (0, 1]");
    }
    return std::sqrt(2.0 * eps * kLog2);
}

double alpha_of(double eps, double beta) {
    if (!(beta > 0.0)) {
        throw validation_error("alpha_of: beta must be positive");
    }
    return beta_c(eps) / beta;
}

int mixing_steps(int n) {
    if (n <= 2) {
        throw validation_error("mixing_steps: n must be >= 3 (log(1-2/n) degenerate)");
    }
    const double inner = 1.5 * (n - 1) * kLog2 / std::fabs(std::log1p(-2.0 / n));
    return 2 * static_cast<int>(std::ceil(inner));
}

namespace {

// Solve a_n * phi(B)/B = 1 in log form: log_a - B^2/2 - log sqrt(2 pi) - log B = 0.
// The left side is strictly decreasing in B on (0, inf), so a bracketed
// bisection is exact business. The nominal bracket [1, 3 sqrt(log a_n) + 3]
// covers every physical instance; it is widened downward for the tiny-a_n
// diagnostics where the root drops below 1.
double solve_B(double log_a) {
    auto f = [log_a](double B) { return log_a - 0.5 * B * B - kLogSqrt2Pi - std::log(B); };
    double lo = 1.0;
    double hi = 3.0 * std::sqrt(std::max(log_a, 1.0)) + 3.0;
    if (f(lo) < 0.0) lo = 1e-8;
    if (f(lo) < 0.0 || f(hi) > 0.0) {
        throw numerical_error("solve_scales: bracket for B_n failed (a_n = e^" +
                              std::to_string(log_a) + ")");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-14 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Scales solve_scales(const ModelParams& p) {
    p.validate();
    Scales s;
    s.beta_c_eps = beta_c(p.eps_effective());
    s.alpha_eps = p.beta > 0.0 ? s.beta_c_eps / p.beta
                               : std::numeric_limits<double>::infinity();
    const double sqn = std::sqrt(static_cast<double>(p.n));

    if (p.theta) {
        // Critical-line mode: pin c_n from theta, derive a_n.
        s.critical_mode = true;
        s.theta = *p.theta;
        s.log_c_n = p.beta * sqn * (sqn * p.beta - s.theta);
        s.c_n = std::exp(s.log_c_n);
        s.Bbar_n = p.beta * sqn - s.theta;
        const double tail = normal_tail(s.Bbar_n);
        if (!(tail > 0.0)) {
            throw numerical_error("solve_scales: normal tail underflow in critical mode; n too large");
        }
        s.a_n = 1.0 / tail;
        s.log_a_n = std::log(s.a_n);
    } else {
        // Pin a_n, derive c_n = exp(beta sqrt(n) Q(1/a_n)).
        if (p.kind == ScaleKind::Intermediate) {
            s.log_a_n = p.eps * p.n * kLog2;
            s.a_n = std::exp2(p.eps * p.n);
        } else {
            s.log_a_n = std::log(p.eps_bar) + p.n * kLog2;
            s.a_n = p.eps_bar * std::exp2(static_cast<double>(p.n));
        }
        if (!(s.a_n > 1.0)) {
            throw validation_error("solve_scales: a_n must exceed 1 (upper quantile undefined)");
        }
        if (!std::isfinite(s.a_n)) {
            throw numerical_error("solve_scales: a_n overflows double");
        }
        s.Bbar_n = normal_quantile_upper(1.0 / s.a_n);
        s.log_c_n = p.beta * sqn * s.Bbar_n;
        s.c_n = std::exp(s.log_c_n);
    }
    if (!std::isfinite(s.c_n)) {
        // c_n itself can exceed double range at large n*beta^2 (e.g. the
        // n=256 critical-mode identity checks); log_c_n stays exact and all
        // large-n consumers work in logs. Simulation entry points that need a
        // finite c_n validate it themselves.
        s.c_n = std::numeric_limits<double>::infinity();
    }

    s.B_n = solve_B(s.log_a_n);
    s.A_n = 1.0 / s.B_n;
    s.alpha_n = p.beta > 0.0 ? s.B_n / (p.beta * sqn)
                             : std::numeric_limits<double>::infinity();
    s.theta_n_mix = p.n == 2 ? 2 : mixing_steps(p.n);
    return s;
}

double h_n(const Scales& s, const ModelParams& p, double v) {
    if (!(v > 0.0)) throw validation_error("h_n: v must be positive");
    if (!(p.beta > 0.0)) throw validation_error("h_n: requires beta > 0");
    const double x = (s.log_c_n + std::log(v)) / (p.beta * std::sqrt(static_cast<double>(p.n)));
    return s.a_n * normal_tail(x);
}

double g_n_inv(const Scales& s, const ModelParams& p, double u) {
    if (!(u > 0.0)) throw validation_error("g_n_inv: u must be positive");
    double lo = std::exp(-s.log_c_n);           // h_n(lo) = a_n/2, the supported max
    double hi = std::max(2.0, std::pow(u, -2.0 / s.alpha_n));
    if (h_n(s, p, lo) < u || h_n(s, p, hi) > u) {
        throw numerical_error("g_n_inv: u outside the supported range of h_n");
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (h_n(s, p, mid) > u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace remdyn
