// Random Hopping Dynamics via the jump-chain + clock decomposition:
// J_n is the simple random walk on the n-cube, the clock accumulates
// holding increments tau_n(J_n(i)) * e_{n,i}, and time-t queries on X_n
// reduce to binary search over the clock.
#pragma once

#include <cstdint>
#include <vector>

#include "remdyn/landscape.hpp"
#include "remdyn/params.hpp"
#include "remdyn/scales.hpp"

namespace remdyn {

enum class StartLaw { Uniform, Gibbs };

// One realization: jump chain, clock partial sums, and the running centering.
struct ClockTrajectory {
    std::vector<Vertex> visits;     // J(0), J(1), ..., J(steps)
    std::vector<double> clock;      // S~(k) = sum_{i<=k} tau(J(i)) e_i; clock[0] > 0
    std::vector<double> centering;  // M at step k (centering[0] = 0)
    std::uint64_t rng_stream = 0;   // trajectory seed
    StartLaw start_law = StartLaw::Uniform;
};

// The single definition of the trajectory draw protocol. Consumes, in order:
// one draw for the start vertex, one exponential for the start holding
// increment, then per jump one coordinate index and one exponential. Both the
// recorded trajectory and the streaming estimators ride on this class, so a
// given (landscape, traj_seed) always yields the same path.
class Walker {
  public:
    Walker(const Landscape& land, StartLaw law, std::uint64_t traj_seed);

    Vertex state() const { return x_; }
    double clock() const { return clock_; }        // S~(k), raw units
    double gamma_clock() const { return gclock_; } // S~(k)/c_n, accumulated directly
    std::uint64_t steps() const { return k_; }

    void advance();  // one jump plus its holding increment

  private:
    const Landscape* land_;
    CounterRng rng_;
    Vertex x_ = 0;
    Vertex mask_ = 0;
    double clock_ = 0.0;
    double gclock_ = 0.0;
    std::uint64_t k_ = 0;
    int n_ = 0;
};

// Record `steps` jumps (so steps+1 visits/clock entries). The centering
// accumulates the mean neighbor value of g_1(gamma) before each jump, an
// O(n) inner loop. Horizons above 10^9 steps are rejected (memory guard).
ClockTrajectory run_trajectory(const Landscape& land, std::uint64_t steps,
                               StartLaw start_law, std::uint64_t traj_seed);

// X_n at rescaled time t: the J(i) with S~(i) <= c_n t < S~(i+1); times before
// the first clock point belong to J(0). Throws horizon_error when c_n t
// exceeds the last recorded clock entry.
Vertex state_at(const ClockTrajectory& traj, const Scales& scales, double t);

// S_n(t) = S~(floor(a_n t)) / c_n; requires floor(a_n t) < clock length.
double rescaled_clock(const ClockTrajectory& traj, const Scales& scales, double t);

// S_n(t) - M_n(t).
double centered_clock(const ClockTrajectory& traj, const Scales& scales, double t);

// Path-level tail diagnostics along the chain: nu = sum_{j<=floor(a_n t)}
// h^u(J(j-1)) and sigma = the same sum of squares, with h^u(y) the mean of
// exp(-u/gamma) over the n neighbors of y (cached per visited vertex).
struct ChainDiag {
    double nu = 0.0;
    double sigma = 0.0;
};
ChainDiag chain_diagnostics(const Landscape& land, const ClockTrajectory& traj,
                            double u, double t);

}  // namespace remdyn
