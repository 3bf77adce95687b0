#include "remdyn/oracles.hpp"

#include <cmath>

#include "remdyn/rng.hpp"
#include "remdyn/scales.hpp"

namespace remdyn {

namespace {
constexpr int kMaxExactN = 12;  // 4096 dense states
}

ExactChain point_mass_chain(int n, Vertex x) {
    if (n < 1 || n > kMaxExactN)
        throw validation_error("point_mass_chain: n must lie in [1, 12]");
    ExactChain chain;
    chain.n = n;
    chain.distribution.assign(std::size_t{1} << n, 0.0);
    chain.distribution.at(x) = 1.0;
    return chain;
}

void evolve_one_step(ExactChain& chain) {
    const std::size_t N = chain.distribution.size();
    const double inv_n = 1.0 / chain.n;
    std::vector<double> next(N, 0.0);
    for (std::size_t x = 0; x < N; ++x) {
        double acc = 0.0;
        for (int i = 0; i < chain.n; ++i) acc += chain.distribution[x ^ (std::size_t{1} << i)];
        next[x] = acc * inv_n;
    }
    chain.distribution.swap(next);
}

double spectral_return(int n, std::uint64_t l) {
    if (n < 1) throw validation_error("spectral_return: n must be >= 1");
    double sum = 0.0;
    double binom = 1.0;  // binom(n, 0)
    for (int j = 0; j <= n; ++j) {
        const double lambda = 1.0 - 2.0 * j / n;
        sum += binom * std::pow(lambda, static_cast<double>(l));
        binom *= static_cast<double>(n - j) / (j + 1);
    }
    return std::ldexp(sum, -n);
}

double mixing_tv(int n, long two_steps) {
    if (n < 3 || n > kMaxExactN)
        throw validation_error("mixing_tv: n must lie in [3, 12]");
    if (two_steps < 0) two_steps = mixing_steps(n) / 2;
    ExactChain chain = point_mass_chain(n, 0);
    for (long k = 0; k < two_steps; ++k) {
        evolve_one_step(chain);
        evolve_one_step(chain);
    }
    // Even parity class of the start; stationary mass 2^{-(n-1)} per state.
    const double pi = std::ldexp(1.0, -(n - 1));
    double worst = 0.0;
    for (std::size_t x = 0; x < chain.distribution.size(); ++x) {
        if (__builtin_popcountll(x) % 2 != 0) continue;
        worst = std::max(worst, std::fabs(chain.distribution[x] / pi - 1.0));
    }
    return worst;
}

BruteCorr brute_force_corr(const Landscape& land, double t, double s,
                           std::uint64_t paths, std::uint64_t root_seed,
                           std::uint64_t disorder_index) {
    if (land.params.n > 10)
        throw validation_error("brute_force_corr: n must be <= 10");
    if (!(t >= 0.0) || !(s > 0.0))
        throw validation_error("brute_force_corr: need t >= 0 and s > 0");
    if (paths == 0) throw validation_error("brute_force_corr: paths must be positive");
    const int n = land.params.n;
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    const double t_raw = land.scales.c_n * t;
    const double end_raw = land.scales.c_n * (t + s);
    std::uint64_t hits = 0;
    for (std::uint64_t p = 0; p < paths; ++p) {
        CounterRng rng(hash_key(root_seed, disorder_index, p));
        Vertex x = rng.next_u64() & mask;
        double time = land.tau(x) * rng.next_exp();  // first event
        // March events forward until the first one past c_n * t.
        while (time <= t_raw) {
            x ^= std::uint64_t{1} << rng.next_index(static_cast<std::uint32_t>(n));
            time += land.tau(x) * rng.next_exp();
        }
        if (time > end_raw) ++hits;  // no event fell inside (c_n t, c_n (t+s)]
    }
    BruteCorr out;
    out.successes = hits;
    out.paths = paths;
    out.mean = static_cast<double>(hits) / static_cast<double>(paths);
    out.se = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(paths));
    return out;
}

std::vector<Vertex> brute_force_visits(const Landscape& land, std::uint64_t steps,
                                       std::uint64_t traj_seed) {
    const int n = land.params.n;
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    CounterRng rng(traj_seed);
    std::vector<Vertex> visits;
    visits.reserve(steps + 1);
    Vertex x = rng.next_u64() & mask;
    visits.push_back(x);
    (void)rng.next_exp();  // the start vertex's holding draw
    for (std::uint64_t k = 0; k < steps; ++k) {
        x ^= std::uint64_t{1} << rng.next_index(static_cast<std::uint32_t>(n));
        visits.push_back(x);
        (void)rng.next_exp();
    }
    return visits;
}

}  // namespace remdyn
