// Closed-form limit objects: the generalized arcsine law, the deterministic
// and cascade-random Levy tails, the stationary correlation, the critical-line
// constant, and the moment/scaling predictions used by the identity checks.
#pragma once

#include <memory>

#include "remdyn/landscape.hpp"
#include "remdyn/params.hpp"
#include "remdyn/scales.hpp"

namespace remdyn {

// Asl_alpha(u) = (sin(alpha pi)/pi) * int_0^u (1-x)^{-alpha} x^{alpha-1} dx,
// the regularized incomplete beta I_u(alpha, 1-alpha); endpoints exact.
double asl_cdf(double alpha, double u);

struct LevyTail {
    enum class Kind { Intermediate, Extreme };
    Kind kind = Kind::Intermediate;
    double alpha = 0.5;  // (0,1] intermediate; the cascade's index for extreme
    std::shared_ptr<const PoissonCascade> cascade;  // extreme only
    double eps_bar = 1.0;                           // extreme only
};

LevyTail intermediate_tail(double alpha);
LevyTail extreme_tail(std::shared_ptr<const PoissonCascade> cascade, double eps_bar);

// nu(u, infinity). Intermediate: u^{-alpha} alpha Gamma(alpha) (alpha = 1
// degenerates to 1/u, i.e. nu(du) = u^{-2} du). Extreme: eps_bar
// sum_k exp(-u/gamma_k) over the materialized marks, with the truncation
// remainder bound eps_bar * count * exp(-u/gamma_count) reported; requires
// marks down to gamma_count < u/40, otherwise a depth error names the
// required count.
struct TailValue {
    double value = 0.0;
    double remainder_bound = 0.0;
};
TailValue levy_tail(const LevyTail& tail, double u);

// C^sta(s) = sum_k (gamma_k / sum gamma) exp(-s/gamma_k); requires alpha < 1
// so the weights are summable. weight_remainder is the integral-comparison
// bound on the un-materialized part of sum gamma, relative to the sum kept.
struct StationaryValue {
    double value = 0.0;
    double weight_remainder = 0.0;
};
StationaryValue stationary_corr(const PoissonCascade& cascade, double s);

// (e^{-theta^2/2} / Phi(theta)) * log(1 + t/s) / (beta sqrt(2 pi)).
double critical_prediction(double theta, double beta, double t, double s);

// Moment and scaling predictions. m1_critical and scale_ratio_limit are NaN
// outside critical mode (they are theta-anchored statements).
struct MomentPredictions {
    double m1_bound = 0.0;          // e^{n beta^2 / 2} / c_n
    double m1_critical = 0.0;       // Phi(theta) * a_n * e^{n beta^2/2} / c_n
    double scale_ratio = 0.0;       // sqrt(n) c_n / (a_n e^{n beta^2/2})
    double scale_ratio_limit = 0.0; // e^{-theta^2/2} / (beta sqrt(2 pi))
};
MomentPredictions moment_predictions(const ModelParams& params, const Scales& scales);

}  // namespace remdyn
