#include "remdyn/limits.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "remdyn/normal.hpp"

namespace remdyn {

namespace {

// Continued fraction for the incomplete beta (modified Lentz); standard
// convergence region x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    throw numerical_error("asl_cdf: incomplete beta continued fraction did not converge");
}

double inc_beta_regularized(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    // log B(a, 1-a) = log(pi / sin(pi a)) when b = 1-a; keep the general form.
    const double log_front =
        a * std::log(x) + b * std::log1p(-x) -
        (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double asl_cdf(double alpha, double u) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("asl_cdf: alpha must lie strictly in (0, 1)");
    if (!(u >= 0.0 && u <= 1.0)) throw validation_error("asl_cdf: u must lie in [0, 1]");
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    return inc_beta_regularized(alpha, 1.0 - alpha, u);
}

LevyTail intermediate_tail(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw validation_error("intermediate_tail: alpha must lie in (0, 1]");
    LevyTail t;
    t.kind = LevyTail::Kind::Intermediate;
    t.alpha = alpha;
    return t;
}

LevyTail extreme_tail(std::shared_ptr<const PoissonCascade> cascade, double eps_bar) {
    if (!cascade || cascade->gammas.empty())
        throw validation_error("extreme_tail: cascade with at least one mark required");
    if (!(eps_bar > 0.0)) throw validation_error("extreme_tail: eps_bar must be positive");
    LevyTail t;
    t.kind = LevyTail::Kind::Extreme;
    t.alpha = cascade->alpha;
    t.cascade = std::move(cascade);
    t.eps_bar = eps_bar;
    return t;
}

TailValue levy_tail(const LevyTail& tail, double u) {
    if (!(u > 0.0)) throw validation_error("levy_tail: u must be positive");
    TailValue out;
    if (tail.kind == LevyTail::Kind::Intermediate) {
        out.value = (tail.alpha == 1.0)
                        ? 1.0 / u
                        : std::pow(u, -tail.alpha) * tail.alpha * std::tgamma(tail.alpha);
        return out;
    }
    const auto& gammas = tail.cascade->gammas;
    const double cutoff = u / 40.0;  // terms below this are < e^{-40} each
    if (gammas.back() >= cutoff) {
        // Gamma_k ~ k, so gamma_k < u/40 needs roughly k > (u/40)^{-alpha}.
        const double need = std::pow(cutoff, -tail.alpha);
        throw numerical_error("levy_tail: cascade depth insufficient for u = " +
                              std::to_string(u) + "; need roughly " +
                              std::to_string(static_cast<std::uint64_t>(need * 1.25) + 1) +
                              " marks");
    }
    double sum = 0.0;
    for (double g : gammas) {
        if (g < cutoff) break;  // the rest is covered by the remainder bound
        sum += std::exp(-u / g);
    }
    out.value = tail.eps_bar * sum;
    out.remainder_bound = tail.eps_bar * static_cast<double>(tail.cascade->count) *
                          std::exp(-u / gammas.back());
    return out;
}

StationaryValue stationary_corr(const PoissonCascade& cascade, double s) {
    if (!(s >= 0.0)) throw validation_error("stationary_corr: s must be nonnegative");
    if (!(cascade.alpha > 0.0 && cascade.alpha < 1.0))
        throw validation_error("stationary_corr: marks summable only for alpha in (0, 1)");
    double total = 0.0, weighted = 0.0;
    for (double g : cascade.gammas) {
        total += g;
        weighted += g * std::exp(-s / g);
    }
    StationaryValue out;
    out.value = (s == 0.0) ? 1.0 : weighted / total;
    // sum_{k>count} Gamma_k^{-1/alpha} <~ integral_count^inf k^{-1/alpha} dk.
    const double inv_a = 1.0 / cascade.alpha;
    const double count = static_cast<double>(cascade.count);
    out.weight_remainder =
        std::pow(count, 1.0 - inv_a) / (inv_a - 1.0) / total;
    return out;
}

double critical_prediction(double theta, double beta, double t, double s) {
    if (!(s > 0.0)) throw validation_error("critical_prediction: s must be positive");
    if (!(t >= 0.0)) throw validation_error("critical_prediction: t must be nonnegative");
    if (!(beta > 0.0)) throw validation_error("critical_prediction: beta must be positive");
    return std::exp(-0.5 * theta * theta) / normal_cdf(theta) * std::log1p(t / s) /
           (beta * kSqrt2Pi);
}

MomentPredictions moment_predictions(const ModelParams& params, const Scales& scales) {
    params.validate();
    MomentPredictions out;
    const double n = params.n;
    const double half_nb2 = 0.5 * n * params.beta * params.beta;
    out.m1_bound = std::exp(half_nb2 - scales.log_c_n);
    out.scale_ratio = std::exp(0.5 * std::log(n) + scales.log_c_n - scales.log_a_n - half_nb2);
    if (scales.critical_mode) {
        out.m1_critical = normal_cdf(scales.theta) *
                          std::exp(scales.log_a_n + half_nb2 - scales.log_c_n);
        out.scale_ratio_limit =
            std::exp(-0.5 * scales.theta * scales.theta) / (params.beta * kSqrt2Pi);
    } else {
        out.m1_critical = std::numeric_limits<double>::quiet_NaN();
        out.scale_ratio_limit = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

}  // namespace remdyn
