#include "remdyn/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "remdyn/limits.hpp"

namespace remdyn {

namespace {

constexpr std::uint64_t kDefaultMaxSteps = 100'000'000'000ULL;

unsigned worker_count(std::uint64_t n_disorders) {
    unsigned t = 0;
    if (const char* env = std::getenv("REMDYN_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) t = static_cast<unsigned>(v);
    }
    if (t == 0) {
        t = std::thread::hardware_concurrency();
        if (t == 0) t = 1;
    }
    return static_cast<unsigned>(std::min<std::uint64_t>(t, n_disorders));
}

struct DisorderCounts {
    std::vector<std::uint64_t> nojump;   // per s
    std::vector<std::uint64_t> overlap;  // per s (empty if not requested)
    std::uint64_t violations = 0;        // no-jump success without overlap success
};

// One disorder realization: P paths, each walked once; the sorted window ends
// t < t+ss[0] <= t+ss[1] <= ... are crossed in a single pass.
DisorderCounts run_disorder(const EnsembleConfig& cfg, double t,
                            const std::vector<double>& ss_sorted, double rho,
                            bool need_overlap, std::uint64_t d) {
    const Landscape land = build_ensemble_disorder(cfg, d);
    if (cfg.start_law == StartLaw::Gibbs) land.gibbs_cumulative();  // build before the loop
    const std::size_t S = ss_sorted.size();
    const std::uint64_t cap = cfg.max_steps ? cfg.max_steps : kDefaultMaxSteps;
    const double half_rho_n = rho * cfg.params.n / 2.0;

    DisorderCounts counts;
    counts.nojump.assign(S, 0);
    if (need_overlap) counts.overlap.assign(S, 0);

    for (std::uint64_t p = 0; p < cfg.n_paths; ++p) {
        Walker w(land, cfg.start_law, hash_key(cfg.seed, d, p));
        Vertex before = w.state();  // J(k-1) once any advance has happened
        auto cross = [&](double edge) {
            while (w.gamma_clock() <= edge) {
                before = w.state();
                w.advance();
                if (w.steps() > cap)
                    throw horizon_error("estimator: path exceeded max_steps at disorder " +
                                        std::to_string(d));
            }
        };
        cross(t);
        const Vertex x_t = (w.steps() == 0) ? w.state() : before;
        const double first_after_t = w.gamma_clock();
        for (std::size_t i = 0; i < S; ++i) {
            const bool nj = first_after_t > t + ss_sorted[i];
            if (nj) ++counts.nojump[i];
            if (need_overlap) {
                cross(t + ss_sorted[i]);
                const Vertex x_ts = (w.steps() == 0) ? w.state() : before;
                const bool ov = hamming(x_t, x_ts) < half_rho_n;
                if (ov) ++counts.overlap[i];
                if (nj && !ov) ++counts.violations;
            }
        }
    }
    return counts;
}

std::vector<DisorderCounts> run_ensemble(const EnsembleConfig& cfg, double t,
                                         const std::vector<double>& ss_sorted, double rho,
                                         bool need_overlap) {
    const std::uint64_t D = cfg.n_disorders;
    std::vector<DisorderCounts> results(D);
    const unsigned T = worker_count(D);
    if (T <= 1) {
        for (std::uint64_t d = 0; d < D; ++d)
            results[d] = run_disorder(cfg, t, ss_sorted, rho, need_overlap, d);
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            const std::uint64_t d = next.fetch_add(1);
            if (d >= D || failed.load()) return;
            try {
                results[d] = run_disorder(cfg, t, ss_sorted, rho, need_overlap, d);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (unsigned i = 0; i < T; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

// Two-level statistics from per-disorder success fractions.
CorrelationEstimate assemble(const EnsembleConfig& cfg, CorrelationEstimate::Kind kind,
                             std::optional<double> rho, double t, double s,
                             const std::vector<double>& p_d) {
    const auto D = static_cast<double>(p_d.size());
    const auto P = static_cast<double>(cfg.n_paths);
    CorrelationEstimate est;
    est.kind = kind;
    est.rho = rho;
    est.t = t;
    est.s = s;
    est.n_paths = cfg.n_paths;
    est.n_disorders = cfg.n_disorders;
    est.mean = std::accumulate(p_d.begin(), p_d.end(), 0.0) / D;
    double v_between = 0.0;
    for (double p : p_d) v_between += (p - est.mean) * (p - est.mean);
    v_between = (p_d.size() > 1) ? v_between / (D - 1.0) : 0.0;
    double v_within = 0.0;  // per-path Bernoulli variance, averaged over disorders
    if (cfg.n_paths > 1) {
        for (double p : p_d) v_within += p * (1.0 - p);
        v_within *= P / (P - 1.0);
        v_within /= D;
    }
    est.se_path = std::sqrt(v_within / (D * P));
    if (p_d.size() > 1) {
        est.se = std::sqrt(v_between / D);
        est.se_disorder = std::sqrt(std::max(0.0, v_between - v_within / P) / D);
    } else {
        est.se = est.se_path;
        est.se_disorder = 0.0;
    }
    return est;
}

struct SweepPlan {
    std::vector<double> sorted;         // ascending s values
    std::vector<std::size_t> position;  // sorted index -> input index
};

SweepPlan plan_sweep(const std::vector<double>& ss) {
    if (ss.empty()) throw validation_error("estimator: empty s grid");
    for (double s : ss)
        if (!(s > 0.0)) throw validation_error("estimator: s must be positive");
    SweepPlan plan;
    std::vector<std::size_t> order(ss.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ss[a] < ss[b]; });
    plan.sorted.reserve(ss.size());
    plan.position = order;
    for (std::size_t i : order) plan.sorted.push_back(ss[i]);
    return plan;
}

std::vector<CorrelationEstimate> sweep(const EnsembleConfig& cfg, double t,
                                       const std::vector<double>& ss, double rho,
                                       bool overlap_kind,
                                       std::uint64_t* violations_out = nullptr) {
    cfg.validate();
    if (!(t >= 0.0)) throw validation_error("estimator: t must be nonnegative");
    if (overlap_kind && !(rho > 0.0 && rho < 1.0))
        throw validation_error("estimator: rho must lie in (0, 1)");
    const SweepPlan plan = plan_sweep(ss);
    const auto counts = run_ensemble(cfg, t, plan.sorted, rho, overlap_kind);

    std::vector<CorrelationEstimate> out(ss.size());
    const auto P = static_cast<double>(cfg.n_paths);
    for (std::size_t i = 0; i < plan.sorted.size(); ++i) {
        std::vector<double> p_d(cfg.n_disorders);
        for (std::uint64_t d = 0; d < cfg.n_disorders; ++d) {
            const auto& c = overlap_kind ? counts[d].overlap : counts[d].nojump;
            p_d[d] = static_cast<double>(c[i]) / P;
        }
        out[plan.position[i]] = assemble(
            cfg, overlap_kind ? CorrelationEstimate::Kind::Overlap : CorrelationEstimate::Kind::NoJump,
            overlap_kind ? std::optional<double>(rho) : std::nullopt, t, plan.sorted[i], p_d);
    }
    if (violations_out) {
        *violations_out = 0;
        for (const auto& c : counts) *violations_out += c.violations;
    }
    return out;
}

}  // namespace

Landscape build_ensemble_disorder(const EnsembleConfig& cfg, std::uint64_t d) {
    const std::uint64_t seed = hash_key(cfg.seed, "disorder", d);
    if (cfg.mode == LandscapeMode::LePage)
        return lepage_build(cfg.params, cfg.scales, cfg.lepage_count, seed);
    return Landscape(cfg.params, cfg.scales, seed);
}

void EnsembleConfig::validate() const {
    params.validate();
    if (n_paths < 1 || n_disorders < 1)
        throw validation_error("ensemble: paths and disorders must be >= 1");
    if (mode == LandscapeMode::LePage && lepage_count == 0)
        throw validation_error("ensemble: lepage_count must be positive");
}

CorrelationEstimate estimate_nojump(const EnsembleConfig& cfg, double t, double s) {
    return sweep(cfg, t, {s}, 0.0, false).front();
}

std::vector<CorrelationEstimate> estimate_nojump_sweep(const EnsembleConfig& cfg, double t,
                                                       const std::vector<double>& ss) {
    return sweep(cfg, t, ss, 0.0, false);
}

CorrelationEstimate estimate_overlap(const EnsembleConfig& cfg, double t, double s,
                                     double rho) {
    return sweep(cfg, t, {s}, rho, true).front();
}

std::vector<CorrelationEstimate> estimate_overlap_sweep(const EnsembleConfig& cfg, double t,
                                                        const std::vector<double>& ss,
                                                        double rho) {
    return sweep(cfg, t, ss, rho, true);
}

EquivalenceReport estimate_equivalence(const EnsembleConfig& cfg, double t, double s,
                                       double rho) {
    EquivalenceReport report;
    std::uint64_t violations = 0;
    // The overlap pass also counts no-jump successes on the same trajectories.
    report.overlap = sweep(cfg, t, {s}, rho, true, &violations).front();
    report.nojump = estimate_nojump(cfg, t, s);
    report.inclusion_violations = violations;
    return report;
}

CriticalResult critical_sweep(const EnsembleConfig& cfg, double t, double s) {
    if (!cfg.scales.critical_mode)
        throw validation_error("critical_sweep: scales must be resolved in critical mode");
    CriticalResult result;
    result.estimate = estimate_nojump(cfg, t, s);
    const double root_n = std::sqrt(static_cast<double>(cfg.params.n));
    result.scaled_mean = root_n * result.estimate.mean;
    result.scaled_se = root_n * result.estimate.se;
    result.prediction = critical_prediction(cfg.scales.theta, cfg.params.beta, t, s);
    return result;
}

}  // namespace remdyn
