// Resolution of all deterministic scaling quantities for one model instance:
// the time-scale pair (a_n, c_n), critical temperature, the Gaussian-extreme
// normalization B_n, the tail exponent alpha_n, and the jump-chain mixing
// step count theta_n.
#pragma once

#include "remdyn/params.hpp"

namespace remdyn {

// Resolved scale bundle. log_a_n / log_c_n are carried alongside the plain
// values so that large-n identities can be evaluated without overflow.
struct Scales {
    double a_n = 0.0;       // number of steps per unit rescaled time
    double log_a_n = 0.0;
    double c_n = 0.0;       // clock normalization
    double log_c_n = 0.0;
    double alpha_eps = 0.0; // beta_c(eps)/beta; < 1 aging, 1 critical, > 1 LLN
    double beta_c_eps = 0.0;
    double B_n = 0.0;       // a_n * phi(B_n)/B_n = 1
    double A_n = 0.0;       // 1/B_n
    double alpha_n = 0.0;   // B_n/(beta sqrt(n)); finite-n tail exponent
    double Bbar_n = 0.0;    // log c_n/(beta sqrt(n))
    int theta_n_mix = 0;    // even mixing-step count for the jump chain
    bool critical_mode = false;
    double theta = 0.0;     // only meaningful when critical_mode
};

// Critical inverse temperature of the eps-family of scales.
double beta_c(double eps);

// Stable index alpha(eps) = beta_c(eps)/beta.
double alpha_of(double eps, double beta);

// Mixing step count theta_n = 2*ceil((3/2)(n-1)log2 / |log(1-2/n)|); n >= 3.
int mixing_steps(int n);

// Resolve every scale quantity. Default mode pins a_n (2^{eps n} or
// eps_bar 2^n) and derives c_n from the defining identity
// a_n * P(tau > c_n) = 1. When params.theta is set, the critical mode pins
// c_n = exp(beta sqrt(n) (sqrt(n) beta - theta)) instead and derives a_n from
// the same identity, so the theta-scaling holds exactly at finite n.
Scales solve_scales(const ModelParams& params);

// h_n(v) = a_n * P(tau > c_n v): the rescaled-landscape tail function.
// Strictly decreasing with h_n(1) = 1. Requires beta > 0.
double h_n(const Scales& s, const ModelParams& p, double v);

// Numerical inverse of h_n by monotone bisection.
double g_n_inv(const Scales& s, const ModelParams& p, double u);

}  // namespace remdyn
