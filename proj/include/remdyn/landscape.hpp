// The quenched random environment tau_n(x) = exp(-beta H_n(x)) over the
// n-cube, H_n(x) ~ N(0, n) i.i.d. across vertices.
//
// Two representations:
//   Direct — lazy: any vertex's value is recomputed on demand from a
//     counter-based generator keyed by (seed, vertex bits), so trajectories
//     over 2^n >> memory vertices need no storage and replay exactly.
//   LePage — explicit order statistics: the rescaled values are built from
//     cumulative exponential sums and assigned to uniformly shuffled vertices,
//     coupling the landscape to the Poisson cascade that appears in the
//     extreme-scale limit objects.
#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "remdyn/normal.hpp"
#include "remdyn/params.hpp"
#include "remdyn/rng.hpp"
#include "remdyn/scales.hpp"

namespace remdyn {

// An n-bit cube configuration; bit i = 1 encodes spin +1 at coordinate i.
using Vertex = std::uint64_t;

inline int hamming(Vertex a, Vertex b) { return __builtin_popcountll(a ^ b); }

// Cumulative exponential marks Gamma_k and the derived Poisson-process points
// gamma_k = Gamma_k^{-1/alpha} (decreasing).
struct PoissonCascade {
    std::vector<double> Gammas;  // strictly increasing
    std::vector<double> gammas;  // strictly decreasing
    double alpha = 0.0;          // in (0, 1)
    std::uint64_t count = 0;
};

// Materialize a cascade of `count` marks from the stream keyed by `seed`.
PoissonCascade build_cascade(double alpha, std::uint64_t count, std::uint64_t seed);

enum class LandscapeMode { Direct, LePage };

class Landscape {
  public:
    // Direct (lazy) representation.
    Landscape(const ModelParams& params, const Scales& scales, std::uint64_t seed);

    ModelParams params;
    Scales scales;
    LandscapeMode mode = LandscapeMode::Direct;
    std::uint64_t seed = 0;

    // H_n(x): the Gaussian energy (direct mode only).
    double hamiltonian(Vertex x) const {
        const double u = u01_open(keyed_u64(seed, x));
        return sqrt_n_ * normal_quantile_ppnd(u);
    }

    // tau_n(x) = exp(-beta H_n(x)).
    double tau(Vertex x) const { return gamma(x) * scales.c_n; }

    // gamma_n(x) = tau_n(x)/c_n; the hot path of every walk step.
    double gamma(Vertex x) const {
        if (mode == LandscapeMode::Direct) {
            const double u = u01_open(keyed_u64(seed, x));
            return std::exp(-params.beta * sqrt_n_ * normal_quantile_ppnd(u) - scales.log_c_n);
        }
        if (x < values_->size()) return (*values_)[x];
        return lazy_lepage_gamma(x);
    }

    // LePage extras; empty/null in direct mode.
    std::shared_ptr<const PoissonCascade> cascade;
    bool truncated = false;          // n > 26: only top-count marks exact
    std::uint64_t exact_marks = 0;   // number of exactly materialized marks

    // Sorted-by-vertex table of gamma values (LePage mode, n <= 26).
    const std::vector<double>& gamma_values() const { return *values_; }

    // Cumulative gamma-weights over all 2^n vertices, for Gibbs start draws
    // (weights tau/sum tau = gamma/sum gamma). Built lazily on first use;
    // requires a materializable vertex set (n <= 26, or non-truncated LePage).
    const std::vector<double>& gibbs_cumulative() const;

    friend Landscape lepage_build(const ModelParams&, const Scales&, std::uint64_t, std::uint64_t);

  private:
    struct GibbsCache;
    double sqrt_n_ = 0.0;
    std::shared_ptr<const std::vector<double>> values_;  // LePage, indexed by vertex
    std::shared_ptr<const std::unordered_map<Vertex, double>> top_marks_;  // truncated mode
    std::shared_ptr<GibbsCache> gibbs_;
    double lazy_lepage_gamma(Vertex x) const;
    double trunc_quantile_ = 0.0;  // Gamma_count/Gamma_{N+1} for the lazy fill
};

// Build the LePage-mode landscape plus its cascade. Preconditions: extreme
// scale, alpha(eps) in (0,1). For n <= 26 all 2^n values are materialized and
// count is only a cascade-depth floor; for larger n the top `count` order
// statistics are exact (count <= 2^n required) and the rest are filled lazily
// by per-vertex inversion below the last materialized mark.
Landscape lepage_build(const ModelParams& params, const Scales& scales,
                       std::uint64_t count, std::uint64_t seed);

// --- Lattice averages -------------------------------------------------------
// Exact sums for n <= 26; Monte Carlo with standard error above that.

struct LatticeStat {
    double value = 0.0;
    double stderr_ = 0.0;   // 0 for exact sums
    std::uint64_t samples = 0;
    bool exact = true;
};

// nu_n(u, inf) = (a_n/2^n) sum_x exp(-u/gamma_n(x)).
LatticeStat lattice_nu(const Landscape& l, double u, std::uint64_t max_samples = 10'000'000);

// sigma_n(u, inf) = (a_n/2^n) sum_{x,x'} p2_n(x,x') e^{-u/gamma(x)} e^{-u/gamma(x')}
// where p2 is the two-step transition kernel: weight 1/n on x'=x and 1/n^2 on
// each of the n(n-1) ordered two-flip neighbors. Exact only (n <= 26).
LatticeStat lattice_sigma(const Landscape& l, double u);

// m_n = (a_n/2^n) sum_x g_1(gamma_n(x)) with g_delta(u) = u(1 - e^{-delta/u}).
LatticeStat lattice_m(const Landscape& l, std::uint64_t max_samples = 10'000'000);

enum class LambdaKind { A3, A3prime };

// lambda_{delta,n} (g_delta sum) or lambda-bar_{delta,n} (f_delta sum) with
// f_delta(u) = u^2 (1 - e^{-delta/u}) - delta u e^{-delta/u}.
LatticeStat lattice_lambda(const Landscape& l, double delta, LambdaKind which,
                           std::uint64_t max_samples = 10'000'000);

// Truncation helpers shared with the limits module.
inline double g_delta(double delta, double u) { return u * (-std::expm1(-delta / u)); }
inline double f_delta(double delta, double u) {
    return u * u * (-std::expm1(-delta / u)) - delta * u * std::exp(-delta / u);
}

}  // namespace remdyn
