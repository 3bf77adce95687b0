// Exact small-instance references: the spectral return probability of the
// cube walk, dense distribution evolution for mixing bounds, and a
// deliberately plain re-implementation of the correlation estimate used to
// cross-check the dynamics/estimators pipeline.
#pragma once

#include <cstdint>
#include <vector>

#include "remdyn/landscape.hpp"

namespace remdyn {

// Dense distribution over the 2^n cube vertices (n <= 12).
struct ExactChain {
    int n = 0;
    std::vector<double> distribution;
};

ExactChain point_mass_chain(int n, Vertex x);

// One simple-random-walk transition applied in place.
void evolve_one_step(ExactChain& chain);

// p^l(x, x) for the SRW on the n-cube via the eigenvalues 1 - 2j/n:
// 2^{-n} sum_j binom(n, j) (1 - 2j/n)^l.
double spectral_return(int n, std::uint64_t l);

// Max-relative deviation of the parity-restricted chain from its uniform
// stationary law pi = 2^{-(n-1)} after `two_steps` two-step transitions from
// a worst-case point mass; two_steps < 0 means the default theta_n / 2.
double mixing_tv(int n, long two_steps = -1);

// Plain no-jump correlation: forward event-by-event simulation, no binary
// search, no clock storage, raw tau-unit time accumulation. Path p consumes
// the stream keyed by hash(root, disorder_index, p), the same derivation the
// ensemble estimator uses, so equal roots replay identical walks.
struct BruteCorr {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t paths = 0;
};
BruteCorr brute_force_corr(const Landscape& land, double t, double s,
                           std::uint64_t paths, std::uint64_t root_seed,
                           std::uint64_t disorder_index = 0);

// The visit sequence of one plainly-simulated path (for replay equality
// against the recorded-trajectory implementation).
std::vector<Vertex> brute_force_visits(const Landscape& land, std::uint64_t steps,
                                       std::uint64_t traj_seed);

}  // namespace remdyn
