// Acceptance gate: one pass/fail line per criterion (A1..A11). Run with no
// arguments for the full gate or with a subset, e.g. `remdyn_acceptance A3 A8`.
// Exit code 0 iff every selected criterion passes. Tolerances are pinned as
// the k* constants below; ensemble sizes and seeds are fixed so every number
// here is reproducible bit for bit.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "remdyn/dynamics.hpp"
#include "remdyn/estimators.hpp"
#include "remdyn/landscape.hpp"
#include "remdyn/limits.hpp"
#include "remdyn/oracles.hpp"
#include "remdyn/rng.hpp"
#include "remdyn/scales.hpp"

using namespace remdyn;

namespace {

// --- pinned tolerances -------------------------------------------------------
constexpr double kA1Dev = 0.08;        // |C_hat - Asl| per s point, n = 20
constexpr double kA2Level = 0.1;       // high-temperature C_hat(1,1) at n = 20
constexpr double kA3Rel = 0.35;        // sqrt(n) C_hat vs closed form, n = 24
constexpr double kA4Gap = 0.03;        // |overlap - nojump|
constexpr double kA5Dev = 0.1;         // extreme crossover vs Asl_alpha(1/2)
constexpr double kA6Dev = 0.1;         // per-realization vs C_sta(s)
constexpr double kA6TSigma = 2.0;      // t-independence, units of stderr
constexpr double kA7Quad = 1e-10;      // asl_cdf vs adaptive quadrature
constexpr double kA7Closed = 1e-12;    // nu_int(1, inf) vs alpha Gamma(alpha)
constexpr double kA7Slope = 0.03;      // cascade tail log-log slope vs -alpha
constexpr double kA7Level = 0.02;      // cascade tail level at u = 0.01
constexpr double kA8Ident = 1e-9;      // defining scale identities
constexpr double kA8Ratio = 0.05;      // scale-ratio vs limit at n = 256
constexpr double kA9Spectral = 1e-12;  // spectral vs dense matrix powers
constexpr double kA10Nu = 0.15;        // lattice nu vs nu_int(1, inf)
constexpr double kA10Sigma = 0.25;     // n sigma_n vs nu_int(2, inf)
constexpr double kA10Chain = 0.15;     // chain nu^{J,1} vs nu_int(1, inf)
constexpr int kA10KsBudget = 10;       // of 200 reps may exceed the 1% KS line
constexpr double kA11Sigmas = 3.0;     // brute force vs estimator, combined se

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

EnsembleConfig intermediate_cfg(unsigned n, double eps, double alpha, std::uint64_t D,
                                std::uint64_t P, std::uint64_t seed) {
    ModelParams m;
    m.n = n;
    m.kind = ScaleKind::Intermediate;
    m.eps = eps;
    m.beta = beta_c(eps) / alpha;
    EnsembleConfig cfg;
    cfg.params = m;
    cfg.scales = solve_scales(m);
    cfg.n_disorders = D;
    cfg.n_paths = P;
    cfg.seed = seed;
    return cfg;
}

EnsembleConfig extreme_cfg(unsigned n, double eps_bar, double beta, std::uint64_t D,
                           std::uint64_t P, std::uint64_t seed) {
    ModelParams m;
    m.n = n;
    m.kind = ScaleKind::Extreme;
    m.eps_bar = eps_bar;
    m.beta = beta;
    EnsembleConfig cfg;
    cfg.params = m;
    cfg.scales = solve_scales(m);
    cfg.mode = LandscapeMode::LePage;
    cfg.n_disorders = D;
    cfg.n_paths = P;
    cfg.seed = seed;
    return cfg;
}

double max_asl_dev(unsigned n, std::uint64_t seed, const std::vector<double>& ss,
                   std::vector<double>* devs_out = nullptr) {
    EnsembleConfig cfg = intermediate_cfg(n, 0.5, 0.6, 2000, 50, seed);
    const auto sweep = estimate_nojump_sweep(cfg, 1.0, ss);
    double worst = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
        const double target = asl_cdf(0.6, 1.0 / (1.0 + ss[i]));
        const double dev = std::abs(sweep[i].mean - target);
        if (devs_out) devs_out->push_back(dev);
        worst = std::max(worst, dev);
    }
    return worst;
}

// --- criteria ----------------------------------------------------------------

Outcome run_a1() {
    const std::vector<double> ss = {0.5, 1.0, 3.0};
    std::vector<double> devs20;
    const double worst20 = max_asl_dev(20, 101, ss, &devs20);
    const double worst12 = max_asl_dev(12, 102, ss);
    bool pass = worst20 <= kA1Dev && worst12 > worst20;
    std::string detail = "devs@n20 " + fmt(devs20[0]) + "/" + fmt(devs20[1]) + "/" +
                         fmt(devs20[2]) + " vs " + fmt(kA1Dev) + ", max@n12 " +
                         fmt(worst12);
    return {pass, detail};
}

Outcome run_a2() {
    double prev = 1e300;
    double level20 = 0.0;
    bool monotone = true;
    for (unsigned n : {12u, 16u, 20u}) {
        EnsembleConfig cfg = intermediate_cfg(n, 0.5, 2.0, 400, 50, 201);
        const double mean = estimate_nojump(cfg, 1.0, 1.0).mean;
        if (mean >= prev) monotone = false;
        prev = mean;
        if (n == 20) level20 = mean;
    }
    const bool pass = level20 <= kA2Level && monotone;
    return {pass, "C(1,1)@n20 " + fmt(level20) + " vs " + fmt(kA2Level) +
                      (monotone ? ", decreasing over n" : ", NOT monotone")};
}

Outcome run_a3() {
    auto ratio_at = [](unsigned n) {
        ModelParams m;
        m.n = n;
        m.kind = ScaleKind::Intermediate;
        m.eps = 1.0;
        m.beta = beta_c(1.0);
        m.theta = 0.0;
        EnsembleConfig cfg;
        cfg.params = m;
        cfg.scales = solve_scales(m);
        cfg.n_disorders = 24;
        cfg.n_paths = 40;
        cfg.seed = 301;
        const CriticalResult r = critical_sweep(cfg, 1.0, 1.0);
        return r.scaled_mean / r.prediction;
    };
    const double r16 = ratio_at(16);
    const double r24 = ratio_at(24);
    const bool pass =
        std::abs(r24 - 1.0) <= kA3Rel && std::abs(r24 - 1.0) < std::abs(r16 - 1.0);
    return {pass, "sqrt(n)C/pred " + fmt(r16) + "@n16 -> " + fmt(r24) + "@n24 (want |" +
                      fmt(r24 - 1.0) + "| <= " + fmt(kA3Rel) + " and shrinking)"};
}

Outcome run_a4() {
    EnsembleConfig cfg = intermediate_cfg(20, 0.5, 0.6, 600, 50, 401);
    const EquivalenceReport rep = estimate_equivalence(cfg, 1.0, 1.0, 0.5);
    const double gap = std::abs(rep.overlap.mean - rep.nojump.mean);
    const bool pass = rep.inclusion_violations == 0 && gap <= kA4Gap;
    return {pass, "gap " + fmt(gap) + " vs " + fmt(kA4Gap) + ", violations " +
                      std::to_string(rep.inclusion_violations)};
}

Outcome run_a5() {
    const double beta = 1.5 * beta_c(1.0);
    EnsembleConfig cfg = extreme_cfg(16, 1.0, beta, 500, 50, 501);
    const double alpha = cfg.scales.alpha_eps;
    const double target = asl_cdf(alpha, 0.5);
    const CorrelationEstimate est = estimate_nojump(cfg, 0.01, 0.01);
    const double dev = std::abs(est.mean - target);
    return {dev <= kA5Dev, "C(0.01,0.01) " + fmt(est.mean) + " vs Asl_" + fmt(alpha) +
                               "(1/2) = " + fmt(target) + ", dev " + fmt(dev)};
}

Outcome run_a6() {
    const double beta = 1.5 * beta_c(1.0);
    const std::vector<double> ts = {0.5, 1.0, 2.0};
    const std::vector<double> ss = {0.5, 2.0};
    const int R = 8;
    double worst_dev = 0.0;
    // means[t][s] over realizations
    std::vector<std::vector<std::vector<double>>> means(
        ts.size(), std::vector<std::vector<double>>(ss.size()));
    for (int r = 0; r < R; ++r) {
        EnsembleConfig cfg = extreme_cfg(16, 1.0, beta, 1, 1500, hash_key(601, "real", r));
        cfg.start_law = StartLaw::Gibbs;
        const Landscape land = build_ensemble_disorder(cfg, 0);
        std::vector<double> pred(ss.size());
        for (std::size_t j = 0; j < ss.size(); ++j)
            pred[j] = stationary_corr(*land.cascade, ss[j]).value;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const auto sweep = estimate_nojump_sweep(cfg, ts[i], ss);
            for (std::size_t j = 0; j < ss.size(); ++j) {
                worst_dev = std::max(worst_dev, std::abs(sweep[j].mean - pred[j]));
                means[i][j].push_back(sweep[j].mean);
            }
        }
    }
    // Pooled t-independence at each s: realization-level mean +/- stderr.
    auto pool = [](const std::vector<double>& v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double var = 0.0;
        for (double x : v) var += (x - m) * (x - m);
        var /= (v.size() - 1.0);
        return std::pair<double, double>(m, std::sqrt(var / v.size()));
    };
    double worst_t_sigmas = 0.0;
    for (std::size_t j = 0; j < ss.size(); ++j) {
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t k = i + 1; k < ts.size(); ++k) {
                const auto [mi, ei] = pool(means[i][j]);
                const auto [mk, ek] = pool(means[k][j]);
                worst_t_sigmas =
                    std::max(worst_t_sigmas, std::abs(mi - mk) / std::hypot(ei, ek));
            }
    }
    const bool pass = worst_dev <= kA6Dev && worst_t_sigmas <= kA6TSigma;
    return {pass, "max per-realization dev " + fmt(worst_dev) + " vs " + fmt(kA6Dev) +
                      ", max t-drift " + fmt(worst_t_sigmas) + " se vs " + fmt(kA6TSigma)};
}

Outcome run_a7() {
    double worst_quad = 0.0;
    for (double a : {0.2, 0.5, 0.8})
        for (int i = 1; i <= 99; ++i) {
            const double u = i / 100.0;
            worst_quad = std::max(worst_quad,
                                  std::abs(asl_cdf(a, u) - testref::asl_quadrature(a, u)));
        }
    double worst_closed = 0.0;
    for (double a : {0.2, 0.4, 0.5, 0.6, 0.8, 0.9}) {
        const double v = levy_tail(intermediate_tail(a), 1.0).value;
        worst_closed = std::max(worst_closed, std::abs(v - a * std::tgamma(a)));
    }
    // Cascade tail: 200 realizations, regular variation at small u.
    const double alpha = 0.5;
    const std::vector<double> us = {1e-3, 3.1623e-3, 1e-2, 3.1623e-2, 1e-1};
    std::vector<double> mean(us.size(), 0.0);
    for (int c = 0; c < 200; ++c) {
        auto cascade = std::make_shared<const PoissonCascade>(
            build_cascade(alpha, 100'000, hash_key(701, "casc", c)));
        const LevyTail tail = extreme_tail(cascade, 1.0);
        for (std::size_t i = 0; i < us.size(); ++i)
            mean[i] += levy_tail(tail, us[i]).value / 200.0;
    }
    std::vector<double> lu, lv;
    for (std::size_t i = 0; i < us.size(); ++i) {
        lu.push_back(std::log(us[i]));
        lv.push_back(std::log(mean[i]));
    }
    const double slope = testref::fit_slope(lu, lv);
    const double level_rel =
        std::abs(mean[2] / (std::pow(0.01, -alpha) * alpha * std::tgamma(alpha)) - 1.0);
    const bool pass = worst_quad <= kA7Quad && worst_closed <= kA7Closed &&
                      std::abs(slope + alpha) <= kA7Slope && level_rel <= kA7Level;
    return {pass, "quad dev " + fmt(worst_quad) + ", closed dev " + fmt(worst_closed) +
                      ", slope " + fmt(slope) + " vs -0.5, level rel " + fmt(level_rel)};
}

Outcome run_a8() {
    double worst = 0.0;
    for (unsigned n : {8u, 16u, 32u, 64u, 128u})
        for (auto [eps, alpha] : std::vector<std::pair<double, double>>{
                 {0.3, 0.5}, {0.5, 0.8}, {0.8, 1.5}, {1.0, 1.0}}) {
            ModelParams m;
            m.n = n;
            m.kind = ScaleKind::Intermediate;
            m.eps = eps;
            m.beta = beta_c(eps) / alpha;
            const Scales s = solve_scales(m);
            const double id1 = s.a_n * testref::phi_upper(s.Bbar_n);
            const double phi_Bn = std::exp(-0.5 * s.B_n * s.B_n) / std::sqrt(2.0 * M_PI);
            const double id2 = s.a_n * phi_Bn / s.B_n;
            worst = std::max({worst, std::abs(id1 - 1.0), std::abs(id2 - 1.0)});
        }
    ModelParams big;
    big.n = 256;
    big.kind = ScaleKind::Intermediate;
    big.eps = 1.0;
    big.beta = beta_c(1.0);
    big.theta = 0.0;
    const Scales sb = solve_scales(big);
    const MomentPredictions mp = moment_predictions(big, sb);
    const double ratio_rel = std::abs(mp.scale_ratio / mp.scale_ratio_limit - 1.0);
    const bool pass = worst <= kA8Ident && ratio_rel <= kA8Ratio;
    return {pass, "identity dev " + fmt(worst) + " vs 1e-9, n=256 ratio rel " +
                      fmt(ratio_rel) + " vs " + fmt(kA8Ratio)};
}

Outcome run_a9() {
    double worst = 0.0;
    for (int n = 3; n <= 10; ++n)
        for (std::uint64_t l = 0; l <= 20; ++l)
            worst = std::max(worst,
                             std::abs(spectral_return(n, l) - testref::dense_return(n, l)));
    bool mixing_ok = true;
    for (int n : {8, 10, 12})
        if (!(mixing_tv(n) <= std::pow(2.0, -n))) mixing_ok = false;
    auto max_scaled_sum = [](int n) {
        const std::uint64_t m_max = static_cast<std::uint64_t>(n) * n;
        double sum = 0.0, worst_sum = 0.0;
        std::uint64_t l = 0;
        for (std::uint64_t m = 1; m <= m_max; ++m) {
            for (; l <= 2 * m; ++l) sum += spectral_return(n, l + 2);
            worst_sum = std::max(worst_sum, n * n * sum);
        }
        return worst_sum;
    };
    const double c = max_scaled_sum(8);
    const bool sum_ok =
        max_scaled_sum(10) <= c * 1.0001 && max_scaled_sum(12) <= c * 1.0001;
    const bool pass = worst <= kA9Spectral && mixing_ok && sum_ok;
    return {pass, "spectral dev " + fmt(worst) + ", mixing " +
                      (mixing_ok ? "<= 2^-n" : "VIOLATED") + ", fitted c " + fmt(c) +
                      (sum_ok ? " bounds n=10,12" : " FAILS at n=10 or 12")};
}

Outcome run_a10() {
    // alpha(eps) = 0.5 at n = 20.
    ModelParams m;
    m.n = 20;
    m.kind = ScaleKind::Intermediate;
    m.eps = 0.5;
    m.beta = 2.0 * beta_c(0.5);
    const Scales s = solve_scales(m);
    const double nu1 = levy_tail(intermediate_tail(0.5), 1.0).value;
    const double nu2 = levy_tail(intermediate_tail(0.5), 2.0).value;
    double nu_hat = 0.0, sigma_hat = 0.0;
    const int DL = 6;
    for (int d = 0; d < DL; ++d) {
        const Landscape land(m, s, hash_key(1001, "disorder", d));
        nu_hat += lattice_nu(land, 1.0).value / DL;
        sigma_hat += lattice_sigma(land, 1.0).value / DL;
    }
    const double nu_rel = std::abs(nu_hat / nu1 - 1.0);
    const double sigma_rel = std::abs(m.n * sigma_hat / nu2 - 1.0);

    EnsembleConfig cfg;
    cfg.params = m;
    cfg.scales = s;
    cfg.n_disorders = 32;
    cfg.n_paths = 8;
    cfg.seed = 1002;
    const auto steps = static_cast<std::uint64_t>(s.a_n);
    double chain_nu = 0.0;
    for (std::uint64_t d = 0; d < cfg.n_disorders; ++d) {
        const Landscape land = build_ensemble_disorder(cfg, d);
        for (std::uint64_t p = 0; p < cfg.n_paths; ++p) {
            const auto traj =
                run_trajectory(land, steps, StartLaw::Uniform, hash_key(cfg.seed, d, p));
            chain_nu += chain_diagnostics(land, traj, 1.0, 1.0).nu;
        }
    }
    chain_nu /= static_cast<double>(cfg.n_disorders * cfg.n_paths);
    const double chain_rel = std::abs(chain_nu / nu1 - 1.0);

    // LePage distributional equality at n = 10 (two-sample KS, 200 pairs).
    ModelParams ml;
    ml.n = 10;
    ml.kind = ScaleKind::Extreme;
    ml.eps_bar = 1.0;
    ml.beta = 1.5 * beta_c(1.0);
    const Scales sl = solve_scales(ml);
    int exceed = 0;
    const std::size_t N = 1024;
    const double crit = testref::ks_critical_1pct(static_cast<double>(N));
    for (int rep = 0; rep < 200; ++rep) {
        const Landscape dl(ml, sl, hash_key(1003, "dir", rep));
        const Landscape lp = lepage_build(ml, sl, N, hash_key(1003, "lep", rep));
        std::vector<double> a(N), b(N);
        for (std::uint64_t x = 0; x < N; ++x) {
            a[x] = dl.gamma(x);
            b[x] = lp.gamma(x);
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (testref::ks_statistic(a, b) > crit) ++exceed;
    }
    const bool pass = nu_rel <= kA10Nu && sigma_rel <= kA10Sigma &&
                      chain_rel <= kA10Chain && exceed <= kA10KsBudget;
    return {pass, "nu rel " + fmt(nu_rel) + ", n*sigma rel " + fmt(sigma_rel) +
                      ", chain rel " + fmt(chain_rel) + ", KS exceed " +
                      std::to_string(exceed) + "/200 vs " + std::to_string(kA10KsBudget)};
}

Outcome run_a11() {
    EnsembleConfig cfg = intermediate_cfg(8, 0.5, 0.7, 1, 20'000, 1101);
    const Landscape land = build_ensemble_disorder(cfg, 0);
    double worst_sigmas = 0.0;
    for (auto [t, s] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {1, 1}, {1, 3}}) {
        const CorrelationEstimate est = estimate_nojump(cfg, t, s);
        const BruteCorr brute = brute_force_corr(land, t, s, 20'000, 31337, 0);
        const double se = std::hypot(est.se, brute.se) + 1e-12;
        worst_sigmas = std::max(worst_sigmas, std::abs(est.mean - brute.mean) / se);
    }
    // beta = 0: tau == 1 and c_n == 1, so the window (c_n t, c_n(t+s)] sees a
    // rate-1 Poisson stream and both estimators must hit e^{-c_n s}.
    ModelParams m0;
    m0.n = 8;
    m0.kind = ScaleKind::Intermediate;
    m0.eps = 0.5;
    m0.beta = 0.0;
    EnsembleConfig cfg0;
    cfg0.params = m0;
    cfg0.scales = solve_scales(m0);
    cfg0.n_disorders = 1;
    cfg0.n_paths = 40'000;
    cfg0.seed = 1102;
    const double target = std::exp(-cfg0.scales.c_n * 1.0);
    const CorrelationEstimate est0 = estimate_nojump(cfg0, 0.5, 1.0);
    const Landscape land0 = build_ensemble_disorder(cfg0, 0);
    const BruteCorr brute0 = brute_force_corr(land0, 0.5, 1.0, 40'000, 31337, 0);
    const double dev_est = std::abs(est0.mean - target);
    const double dev_brute = std::abs(brute0.mean - target);
    const bool closed_ok = dev_est <= kA11Sigmas * est0.se + 1e-12 &&
                           dev_brute <= kA11Sigmas * brute0.se + 1e-12;
    const bool pass = worst_sigmas <= kA11Sigmas && closed_ok;
    return {pass, "max |est-brute| " + fmt(worst_sigmas) + " se vs " + fmt(kA11Sigmas) +
                      "; beta=0 devs " + fmt(dev_est) + "/" + fmt(dev_brute) +
                      " vs e^{-s} at 3 se"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"A1", run_a1},  {"A2", run_a2},  {"A3", run_a3},  {"A4", run_a4},
        {"A5", run_a5},  {"A6", run_a6},  {"A7", run_a7},  {"A8", run_a8},
        {"A9", run_a9},  {"A10", run_a10}, {"A11", run_a11},
    };
    std::vector<std::string> selected;
    for (int i = 1; i < argc; ++i) selected.emplace_back(argv[i]);
    if (!selected.empty()) {
        for (const auto& name : selected) {
            const bool known = std::any_of(criteria.begin(), criteria.end(),
                                           [&](const auto& c) { return c.first == name; });
            if (!known) {
                std::fprintf(stderr, "unknown criterion: %s\n", name.c_str());
                return 2;
            }
        }
    }
    bool all_pass = true;
    for (const auto& [name, fn] : criteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), name) == selected.end())
            continue;
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s%s%s\n", name.c_str(), out.pass ? "PASS" : "FAIL",
                    out.pass ? " (" : ": ", (out.detail + (out.pass ? ")" : "")).c_str());
        std::fflush(stdout);
        if (!out.pass) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
