#include "remdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace remdyn {

namespace {

constexpr std::uint64_t kMaxSteps = 1'000'000'000;  // recorded-horizon memory guard

// Mean of g_1(gamma) over the n neighbors of y: one centering increment.
double neighbor_mean_g1(const Landscape& land, Vertex y) {
    const int n = land.params.n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += g_delta(1.0, land.gamma(y ^ (std::uint64_t{1} << i)));
    return s / n;
}

std::uint64_t horizon_index(const Scales& scales, double t, std::size_t limit,
                            const char* who) {
    if (!(t >= 0.0)) throw validation_error(std::string(who) + ": t must be nonnegative");
    const double k = std::floor(scales.a_n * t);
    if (!(k < static_cast<double>(limit)))
        throw horizon_error(std::string(who) + ": floor(a_n t) exceeds the recorded horizon");
    return static_cast<std::uint64_t>(k);
}

}  // namespace

Walker::Walker(const Landscape& land, StartLaw law, std::uint64_t traj_seed)
    : land_(&land), rng_(traj_seed), n_(land.params.n) {
    if (!std::isfinite(land.scales.c_n))
        throw validation_error("Walker: c_n overflows double at these parameters");
    mask_ = (std::uint64_t{1} << n_) - 1;
    if (law == StartLaw::Uniform) {
        x_ = rng_.next_u64() & mask_;
    } else {
        const auto& cum = land.gibbs_cumulative();
        const double u = rng_.next_u01() * cum.back();
        x_ = static_cast<Vertex>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (x_ > mask_) x_ = mask_;  // u == total edge
    }
    const double g = land_->gamma(x_);
    const double e = rng_.next_exp();
    gclock_ = g * e;
    clock_ = g * land_->scales.c_n * e;
}

void Walker::advance() {
    x_ ^= std::uint64_t{1} << rng_.next_index(static_cast<std::uint32_t>(n_));
    const double g = land_->gamma(x_);
    const double e = rng_.next_exp();
    gclock_ += g * e;
    clock_ += g * land_->scales.c_n * e;
    ++k_;
}

ClockTrajectory run_trajectory(const Landscape& land, std::uint64_t steps,
                               StartLaw start_law, std::uint64_t traj_seed) {
    if (steps < 1) throw validation_error("run_trajectory: steps must be >= 1");
    if (steps > kMaxSteps)
        throw validation_error("run_trajectory: horizon above 10^9 steps rejected");
    ClockTrajectory traj;
    traj.rng_stream = traj_seed;
    traj.start_law = start_law;
    traj.visits.resize(steps + 1);
    traj.clock.resize(steps + 1);
    traj.centering.resize(steps + 1);
    Walker w(land, start_law, traj_seed);
    traj.visits[0] = w.state();
    traj.clock[0] = w.clock();
    traj.centering[0] = 0.0;
    for (std::uint64_t k = 1; k <= steps; ++k) {
        traj.centering[k] = traj.centering[k - 1] + neighbor_mean_g1(land, w.state());
        w.advance();
        traj.visits[k] = w.state();
        traj.clock[k] = w.clock();
    }
    return traj;
}

Vertex state_at(const ClockTrajectory& traj, const Scales& scales, double t) {
    if (!(t >= 0.0)) throw validation_error("state_at: t must be nonnegative");
    const double ct = scales.c_n * t;
    auto it = std::upper_bound(traj.clock.begin(), traj.clock.end(), ct);
    if (it == traj.clock.begin()) return traj.visits.front();  // t before first clock point
    if (it == traj.clock.end()) {
        if (ct <= traj.clock.back()) return traj.visits.back();
        throw horizon_error("state_at: c_n t beyond the last clock entry");
    }
    return traj.visits[static_cast<std::size_t>(it - traj.clock.begin()) - 1];
}

double rescaled_clock(const ClockTrajectory& traj, const Scales& scales, double t) {
    const std::uint64_t k = horizon_index(scales, t, traj.clock.size(), "rescaled_clock");
    return traj.clock[k] / scales.c_n;
}

double centered_clock(const ClockTrajectory& traj, const Scales& scales, double t) {
    const std::uint64_t k = horizon_index(scales, t, traj.clock.size(), "centered_clock");
    return traj.clock[k] / scales.c_n - traj.centering[k];
}

ChainDiag chain_diagnostics(const Landscape& land, const ClockTrajectory& traj,
                            double u, double t) {
    if (!(u > 0.0)) throw validation_error("chain_diagnostics: u must be positive");
    if (!(t >= 0.0)) throw validation_error("chain_diagnostics: t must be nonnegative");
    const double kf = std::floor(land.scales.a_n * t);
    if (!(kf <= static_cast<double>(traj.visits.size())))
        throw horizon_error("chain_diagnostics: floor(a_n t) exceeds the recorded horizon");
    const auto k = static_cast<std::uint64_t>(kf);
    const int n = land.params.n;
    std::unordered_map<Vertex, double> cache;  // revisits are the common case
    cache.reserve(2 * k + 1);
    ChainDiag out;
    for (std::uint64_t j = 0; j < k; ++j) {
        const Vertex y = traj.visits[j];
        auto [it, fresh] = cache.try_emplace(y, 0.0);
        if (fresh) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += std::exp(-u / land.gamma(y ^ (std::uint64_t{1} << i)));
            it->second = s / n;
        }
        out.nu += it->second;
        out.sigma += it->second * it->second;
    }
    return out;
}

}  // namespace remdyn
