// Monte Carlo estimation of the two-time correlation functions over
// (disorder, path) ensembles, with the two-level variance split that the
// quenched/annealed statements need.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "remdyn/dynamics.hpp"
#include "remdyn/landscape.hpp"
#include "remdyn/params.hpp"
#include "remdyn/scales.hpp"

namespace remdyn {

struct EnsembleConfig {
    ModelParams params;
    Scales scales;
    std::uint64_t n_paths = 1;
    std::uint64_t n_disorders = 1;
    std::uint64_t seed = 0;
    StartLaw start_law = StartLaw::Uniform;
    LandscapeMode mode = LandscapeMode::Direct;
    std::uint64_t lepage_count = 100'000;  // cascade depth floor in LePage mode
    std::uint64_t max_steps = 0;           // per-path cap; 0 = library default 10^11

    void validate() const;
};

struct CorrelationEstimate {
    enum class Kind { NoJump, Overlap };
    Kind kind = Kind::NoJump;
    std::optional<double> rho;  // Overlap only
    double t = 0.0;
    double s = 0.0;
    double mean = 0.0;         // in [0, 1]
    double se = 0.0;           // total standard error (cluster-level)
    double se_path = 0.0;      // within-disorder sampling component
    double se_disorder = 0.0;  // genuine disorder-fluctuation component
    std::uint64_t n_paths = 0;
    std::uint64_t n_disorders = 0;
};

// The landscape realization the ensemble uses for disorder index d
// (seed = hash(root, "disorder", d)); exposed so replays and per-realization
// comparisons see exactly the ensemble's environments.
Landscape build_ensemble_disorder(const EnsembleConfig& cfg, std::uint64_t d);

// P(no clock point in (c_n t, c_n(t+s)]) -- each path walks to the first
// clock point past c_n t, which decides every window at once.
CorrelationEstimate estimate_nojump(const EnsembleConfig& cfg, double t, double s);

// Batch form: one walk per path serves every s in `ss`.
std::vector<CorrelationEstimate> estimate_nojump_sweep(const EnsembleConfig& cfg, double t,
                                                       const std::vector<double>& ss);

// P(dist(X(c_n t), X(c_n (t+s))) < rho n / 2).
CorrelationEstimate estimate_overlap(const EnsembleConfig& cfg, double t, double s, double rho);

std::vector<CorrelationEstimate> estimate_overlap_sweep(const EnsembleConfig& cfg, double t,
                                                        const std::vector<double>& ss,
                                                        double rho);

// Both estimators on the same trajectories, plus the count of paths that
// violate the event inclusion {no jump} => {overlap} (must be zero).
struct EquivalenceReport {
    CorrelationEstimate nojump;
    CorrelationEstimate overlap;
    std::uint64_t inclusion_violations = 0;
};
EquivalenceReport estimate_equivalence(const EnsembleConfig& cfg, double t, double s,
                                       double rho);

// Critical-line readout: sqrt(n) * C_n with propagated error, next to the
// closed-form prediction for the same (theta, beta, t, s). Requires scales
// resolved in critical mode.
struct CriticalResult {
    CorrelationEstimate estimate;
    double scaled_mean = 0.0;
    double scaled_se = 0.0;
    double prediction = 0.0;
};
CriticalResult critical_sweep(const EnsembleConfig& cfg, double t, double s);

}  // namespace remdyn
