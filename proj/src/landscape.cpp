#include "remdyn/landscape.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace remdyn {

namespace {

constexpr int kExactBits = 26;  // full materialization / exact sums up to 2^26

std::uint64_t vertex_count(int n) {
    if (n > 62) throw validation_error("landscape: n > 62 exceeds the vertex word");
    return std::uint64_t{1} << n;
}

}  // namespace

PoissonCascade build_cascade(double alpha, std::uint64_t count, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("build_cascade: alpha must lie in (0, 1)");
    if (count == 0) throw validation_error("build_cascade: count must be positive");
    PoissonCascade cascade;
    cascade.alpha = alpha;
    cascade.count = count;
    cascade.Gammas.resize(count);
    cascade.gammas.resize(count);
    CounterRng rng(hash_key(seed, "marks"));
    double acc = 0.0;
    for (std::uint64_t k = 0; k < count; ++k) {
        acc += rng.next_exp();
        cascade.Gammas[k] = acc;
        cascade.gammas[k] = std::pow(acc, -1.0 / alpha);
    }
    return cascade;
}

struct Landscape::GibbsCache {
    std::once_flag flag;
    std::vector<double> cumulative;
};

Landscape::Landscape(const ModelParams& p, const Scales& s, std::uint64_t sd)
    : params(p), scales(s), mode(LandscapeMode::Direct), seed(sd) {
    params.validate();
    sqrt_n_ = std::sqrt(static_cast<double>(params.n));
    values_ = std::make_shared<const std::vector<double>>();
    gibbs_ = std::make_shared<GibbsCache>();
}

const std::vector<double>& Landscape::gibbs_cumulative() const {
    if (params.n > kExactBits && !(mode == LandscapeMode::LePage && !truncated))
        throw validation_error(
            "Gibbs start: requires a materializable vertex set (n <= 26 or full LePage)");
    std::call_once(gibbs_->flag, [this] {
        const std::uint64_t N = vertex_count(params.n);
        auto& cum = gibbs_->cumulative;
        cum.resize(N);
        double acc = 0.0;
        for (std::uint64_t x = 0; x < N; ++x) {
            acc += gamma(x);
            cum[x] = acc;
        }
    });
    return gibbs_->cumulative;
}

double Landscape::lazy_lepage_gamma(Vertex x) const {
    // Truncated representation (n > 26): top order statistics sit in the map;
    // any other vertex gets a keyed uniform conditioned on the remaining range.
    if (top_marks_) {
        auto it = top_marks_->find(x);
        if (it != top_marks_->end()) return it->second;
    }
    const double u =
        trunc_quantile_ + (1.0 - trunc_quantile_) * u01_open(keyed_u64(hash_key(seed, "fill"), x));
    return std::exp(-params.beta * sqrt_n_ * normal_quantile_ppnd(u) - scales.log_c_n);
}

Landscape lepage_build(const ModelParams& params, const Scales& scales,
                       std::uint64_t count, std::uint64_t seed) {
    params.validate();
    if (params.kind != ScaleKind::Extreme)
        throw validation_error("lepage_build: requires the extreme scale");
    const double alpha = scales.alpha_eps;
    if (!(alpha > 0.0 && alpha < 1.0))
        throw validation_error("lepage_build: alpha(eps)=beta_c/beta must lie in (0, 1)");
    if (count == 0) throw validation_error("lepage_build: count must be positive");
    const std::uint64_t N = vertex_count(params.n);
    const bool full = params.n <= kExactBits;
    // In the full representation `count` is only a cascade-depth floor; in the
    // truncated one it is the number of exact marks, each owning a vertex.
    if (!full && count > N)
        throw validation_error("lepage_build: count exceeds 2^n");

    Landscape l(params, scales, seed);
    l.mode = LandscapeMode::LePage;
    // The cascade always runs one mark past the landscape so Gamma_{N+1}
    // normalizes the uniform order statistics Gamma_k / Gamma_{N+1}.
    const std::uint64_t exact = full ? N : count;
    const std::uint64_t depth = std::max<std::uint64_t>(count, exact) + 1;
    auto cascade = std::make_shared<PoissonCascade>(build_cascade(alpha, depth, seed));
    l.cascade = cascade;
    l.exact_marks = exact;
    l.truncated = !full;

    const double sqrt_n = std::sqrt(static_cast<double>(params.n));
    const double Gamma_norm =
        full ? cascade->Gammas[N] : static_cast<double>(N) + 1.0;  // LLN surrogate when huge

    if (full) {
        // Rank k vertex value: invert the k-th smallest uniform through the
        // Gaussian quantile, then scatter ranks over a uniform permutation.
        std::vector<double> sorted(N);
        for (std::uint64_t k = 0; k < N; ++k) {
            const double u = cascade->Gammas[k] / Gamma_norm;
            sorted[k] =
                std::exp(-params.beta * sqrt_n * normal_quantile_ppnd(u) - scales.log_c_n);
        }
        std::vector<std::uint32_t> perm(N);
        for (std::uint64_t i = 0; i < N; ++i) perm[i] = static_cast<std::uint32_t>(i);
        CounterRng label_rng(hash_key(seed, "labels"));
        for (std::uint64_t i = N - 1; i > 0; --i) {
            const std::uint64_t j = label_rng.next_index(i + 1);
            std::swap(perm[i], perm[j]);
        }
        auto values = std::make_shared<std::vector<double>>(N);
        for (std::uint64_t k = 0; k < N; ++k) (*values)[perm[k]] = sorted[k];
        l.values_ = std::move(values);
    } else {
        // Top-`count` marks pinned to distinct keyed vertices; everything else
        // filled lazily below the truncation quantile.
        auto top = std::make_shared<std::unordered_map<Vertex, double>>();
        top->reserve(count);
        CounterRng label_rng(hash_key(seed, "labels"));
        const std::uint64_t mask = N - 1;
        for (std::uint64_t k = 0; k < count; ++k) {
            Vertex x = label_rng.next_u64() & mask;
            while (top->count(x) != 0) x = label_rng.next_u64() & mask;
            const double u = cascade->Gammas[k] / Gamma_norm;
            (*top)[x] =
                std::exp(-params.beta * sqrt_n * normal_quantile_ppnd(u) - scales.log_c_n);
        }
        l.top_marks_ = std::move(top);
        l.trunc_quantile_ = cascade->Gammas[count - 1] / Gamma_norm;
    }
    return l;
}

// --- Lattice averages -------------------------------------------------------

namespace {

// Exact average (a_n/2^n) sum_x w(gamma(x)) for n <= 26, Monte Carlo above.
template <typename W>
LatticeStat lattice_average(const Landscape& l, W&& weight, std::uint64_t max_samples) {
    LatticeStat out;
    const int n = l.params.n;
    if (n <= kExactBits) {
        const std::uint64_t N = vertex_count(n);
        double sum = 0.0;
        for (std::uint64_t x = 0; x < N; ++x) sum += weight(l.gamma(x));
        out.value = l.scales.a_n * sum / static_cast<double>(N);
        out.samples = N;
        out.exact = true;
        return out;
    }
    if (max_samples == 0) throw validation_error("lattice average: max_samples must be positive");
    CounterRng rng(hash_key(l.seed, "latticesample"));
    const std::uint64_t mask = vertex_count(n) - 1;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < max_samples; ++i) {
        const double w = l.scales.a_n * weight(l.gamma(rng.next_u64() & mask));
        sum += w;
        sumsq += w * w;
    }
    const double m = static_cast<double>(max_samples);
    out.value = sum / m;
    out.stderr_ = std::sqrt(std::max(0.0, (sumsq / m - out.value * out.value) / (m - 1.0)));
    out.samples = max_samples;
    out.exact = false;
    return out;
}

}  // namespace

LatticeStat lattice_nu(const Landscape& l, double u, std::uint64_t max_samples) {
    if (!(u > 0.0)) throw validation_error("lattice_nu: u must be positive");
    return lattice_average(
        l, [u](double g) { return std::exp(-u / g); }, max_samples);
}

LatticeStat lattice_sigma(const Landscape& l, double u) {
    if (!(u > 0.0)) throw validation_error("lattice_sigma: u must be positive");
    const int n = l.params.n;
    if (n > kExactBits)
        throw validation_error("lattice_sigma: exact pair sum requires n <= 26");
    const std::uint64_t N = vertex_count(n);
    // e[x] = exp(-u/gamma(x)); f[x] = sum over one-flip neighbors of e.
    std::vector<double> e(N), f(N);
    for (std::uint64_t x = 0; x < N; ++x) e[x] = std::exp(-u / l.gamma(x));
    for (std::uint64_t x = 0; x < N; ++x) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += e[x ^ (std::uint64_t{1} << i)];
        f[x] = s;
    }
    // Two-step kernel: weight 1/n back to x, 1/n^2 to each ordered two-flip
    // path; sum_i f[x^e_i] counts every such path once and the return n times.
    const double inv_n = 1.0 / n, inv_n2 = inv_n * inv_n;
    double sum = 0.0;
    for (std::uint64_t x = 0; x < N; ++x) {
        double two = 0.0;
        for (int i = 0; i < n; ++i) two += f[x ^ (std::uint64_t{1} << i)];
        two -= n * e[x];
        sum += e[x] * (e[x] * inv_n + two * inv_n2);
    }
    LatticeStat out;
    out.value = l.scales.a_n * sum / static_cast<double>(N);
    out.samples = N;
    out.exact = true;
    return out;
}

LatticeStat lattice_m(const Landscape& l, std::uint64_t max_samples) {
    return lattice_average(
        l, [](double g) { return g_delta(1.0, g); }, max_samples);
}

LatticeStat lattice_lambda(const Landscape& l, double delta, LambdaKind which,
                           std::uint64_t max_samples) {
    if (!(delta > 0.0)) throw validation_error("lattice_lambda: delta must be positive");
    if (which == LambdaKind::A3)
        return lattice_average(
            l, [delta](double g) { return g_delta(delta, g); }, max_samples);
    return lattice_average(
        l, [delta](double g) { return f_delta(delta, g); }, max_samples);
}

}  // namespace remdyn
