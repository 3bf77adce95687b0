// Command-line front end: scale resolution, landscape diagnostics, trajectory
// simulation, correlation estimation, limit-law evaluation, exact oracles,
// and config-driven experiment runs.
//
// Exit codes: 0 success, 2 validation error (including flag/config parsing),
// 3 numerical or horizon error.
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "remdyn/dynamics.hpp"
#include "remdyn/estimators.hpp"
#include "remdyn/experiment.hpp"
#include "remdyn/landscape.hpp"
#include "remdyn/limits.hpp"
#include "remdyn/oracles.hpp"
#include "remdyn/params.hpp"
#include "remdyn/scales.hpp"
#include "remdyn/toml.hpp"

namespace {

using nlohmann::json;
using namespace remdyn;

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw validation_error("output: cannot write '" + path + "'");
    out << text;
}

// Model from command-line flags; mirrors the config-file rules.
ModelParams make_model(int n, std::optional<double> eps, std::optional<double> eps_bar,
                       std::optional<double> beta, std::optional<double> alpha_target,
                       std::optional<double> theta) {
    ModelParams m;
    m.n = n;
    if (eps.has_value() == eps_bar.has_value())
        throw validation_error("flags: exactly one of --eps / --extreme required");
    if (eps) {
        m.kind = ScaleKind::Intermediate;
        m.eps = *eps;
    } else {
        m.kind = ScaleKind::Extreme;
        m.eps_bar = *eps_bar;
    }
    if (beta.has_value() == alpha_target.has_value())
        throw validation_error("flags: exactly one of --beta / --alpha-target required");
    if (beta) {
        m.beta = *beta;
    } else {
        if (!(*alpha_target > 0.0))
            throw validation_error("flags: --alpha-target must be positive");
        m.beta = beta_c(m.eps_effective()) / *alpha_target;
    }
    m.theta = theta;
    m.validate();
    return m;
}

// First present key among candidates, so configs may use either the
// sectioned layout ([model] n = ...) or bare top-level keys.
std::optional<std::string> find_key(const TomlTable& cfg, std::initializer_list<const char*> keys) {
    for (const char* k : keys)
        if (cfg.has(k)) return std::string(k);
    return std::nullopt;
}

ModelParams model_from_config(const TomlTable& cfg) {
    const auto kn = find_key(cfg, {"model.n", "n"});
    if (!kn) throw validation_error("config: missing n");
    auto get = [&](std::initializer_list<const char*> keys) -> std::optional<double> {
        const auto k = find_key(cfg, keys);
        if (!k) return std::nullopt;
        return cfg.get_double(*k);
    };
    return make_model(static_cast<int>(cfg.get_int(*kn)), get({"model.eps", "eps"}),
                      get({"model.eps_bar", "eps_bar"}), get({"model.beta", "beta"}),
                      get({"model.alpha_target", "alpha_target"}),
                      get({"model.theta", "theta"}));
}

StartLaw start_law_from(const std::string& name) {
    if (name == "uniform") return StartLaw::Uniform;
    if (name == "gibbs") return StartLaw::Gibbs;
    throw validation_error("start_law must be uniform|gibbs, got '" + name + "'");
}

LandscapeMode mode_from(const std::string& name) {
    if (name == "direct") return LandscapeMode::Direct;
    if (name == "lepage") return LandscapeMode::LePage;
    throw validation_error("landscape must be direct|lepage, got '" + name + "'");
}

// ---------------------------------------------------------------- scales --

struct ScalesArgs {
    int n = 0;
    std::optional<double> eps, eps_bar, beta, alpha_target, theta;
    std::string format = "json";
};

int run_scales(const ScalesArgs& a) {
    const ModelParams m =
        make_model(a.n, a.eps, a.eps_bar, a.beta, a.alpha_target, a.theta);
    const Scales s = solve_scales(m);
    if (a.format == "json") {
        std::cout << scales_json_text(s);
        return 0;
    }
    std::ostringstream out;
    out << "field,value\n";
    out << "n," << m.n << '\n';
    out << "eps," << format_double(m.kind == ScaleKind::Intermediate ? m.eps : m.eps_bar)
        << '\n';
    out << "beta," << format_double(m.beta) << '\n';
    out << "a_n," << format_double(s.a_n) << '\n';
    out << "log_a_n," << format_double(s.log_a_n) << '\n';
    out << "c_n," << format_double(s.c_n) << '\n';
    out << "log_c_n," << format_double(s.log_c_n) << '\n';
    out << "alpha_eps," << format_double(s.alpha_eps) << '\n';
    out << "beta_c_eps," << format_double(s.beta_c_eps) << '\n';
    out << "B_n," << format_double(s.B_n) << '\n';
    out << "A_n," << format_double(s.A_n) << '\n';
    out << "alpha_n," << format_double(s.alpha_n) << '\n';
    out << "Bbar_n," << format_double(s.Bbar_n) << '\n';
    out << "theta_n_mix," << s.theta_n_mix << '\n';
    out << "critical_mode," << (s.critical_mode ? 1 : 0) << '\n';
    if (s.critical_mode) out << "theta," << format_double(s.theta) << '\n';
    std::cout << out.str();
    return 0;
}

// ------------------------------------------------------- landscape stats --

struct StatsArgs {
    int n = 0;
    std::optional<double> eps, eps_bar, beta, alpha_target, theta;
    std::vector<double> u{1.0};
    std::vector<double> delta{0.1};
    std::uint64_t seed = 1;
    std::uint64_t disorders = 1;
    std::uint64_t paths = 1;
    std::string mode = "direct";
    std::uint64_t lepage_count = 100'000;
    std::string out;
    std::string format = "csv";
};

int run_stats(const StatsArgs& a) {
    ExperimentConfig cfg;
    cfg.model = make_model(a.n, a.eps, a.eps_bar, a.beta, a.alpha_target, a.theta);
    cfg.kind = ExperimentKind::Diagnostics;
    cfg.mode = mode_from(a.mode);
    cfg.lepage_count = a.lepage_count;
    cfg.diag_u = a.u;
    cfg.diag_delta = a.delta;
    cfg.seed = a.seed;
    cfg.disorders = a.disorders;
    cfg.paths = a.paths;
    cfg.out_path = a.out;
    cfg.format = a.format;
    const ExperimentResult res = run_experiment(cfg);
    emit_experiment(cfg, res);
    return 0;
}

// -------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string config;
    std::string out;
};

int run_simulate(const SimulateArgs& a) {
    const TomlTable cfg = parse_toml_file(a.config);
    const ModelParams m = model_from_config(cfg);
    const Scales scales = solve_scales(m);
    auto dget = [&](std::initializer_list<const char*> keys, double fb) {
        const auto k = find_key(cfg, keys);
        return k ? cfg.get_double(*k) : fb;
    };
    auto iget = [&](std::initializer_list<const char*> keys, std::int64_t fb) {
        const auto k = find_key(cfg, keys);
        return k ? cfg.get_int(*k) : fb;
    };
    auto sget = [&](std::initializer_list<const char*> keys, const std::string& fb) {
        const auto k = find_key(cfg, keys);
        return k ? cfg.get_string(*k) : fb;
    };
    const double t_max = dget({"simulate.t_max", "t_max"}, 1.0);
    if (!(t_max > 0.0)) throw validation_error("config: t_max must be positive");
    const auto trajectories =
        static_cast<std::uint64_t>(iget({"simulate.trajectories", "trajectories"}, 1));
    const auto disorders =
        static_cast<std::uint64_t>(iget({"ensemble.disorders", "disorders"}, 1));
    const auto seed = static_cast<std::uint64_t>(iget({"ensemble.seed", "seed"}, 0));
    const StartLaw law =
        start_law_from(sget({"experiment.start_law", "start_law"}, "uniform"));
    const LandscapeMode mode =
        mode_from(sget({"experiment.landscape", "landscape"}, "direct"));
    if (trajectories < 1 || disorders < 1)
        throw validation_error("config: trajectories and disorders must be >= 1");

    EnsembleConfig ens;
    ens.params = m;
    ens.scales = scales;
    ens.seed = seed;
    ens.start_law = law;
    ens.mode = mode;
    ens.lepage_count = static_cast<std::uint64_t>(
        iget({"experiment.lepage_count", "lepage_count"}, 100'000));

    const auto steps =
        static_cast<std::uint64_t>(std::max(1.0, std::floor(scales.a_n * t_max)));
    std::ostringstream out;
    out << "disorder,path,n,t_max,steps,start_vertex,final_vertex,clock_raw,s_n,"
           "s_n_centered\n";
    for (std::uint64_t d = 0; d < disorders; ++d) {
        const Landscape land = build_ensemble_disorder(ens, d);
        for (std::uint64_t p = 0; p < trajectories; ++p) {
            const ClockTrajectory traj =
                run_trajectory(land, steps, law, hash_key(seed, d, p));
            out << d << ',' << p << ',' << m.n << ',' << format_double(t_max) << ','
                << steps << ',' << traj.visits.front() << ',' << traj.visits.back()
                << ',' << format_double(traj.clock.back()) << ','
                << format_double(rescaled_clock(traj, scales, t_max)) << ','
                << format_double(centered_clock(traj, scales, t_max)) << '\n';
        }
    }
    const std::string path =
        !a.out.empty() ? a.out : sget({"output.path", "out"}, "");
    write_text(path, out.str());
    return 0;
}

// ----------------------------------------------------------- correlation --

struct CorrelationArgs {
    std::string kind;
    std::vector<double> t{1.0};
    std::vector<double> s{1.0};
    std::optional<double> rho;
    std::string config;
    std::string out;
    std::optional<std::string> format;
};

int run_correlation(const CorrelationArgs& a) {
    const TomlTable toml = parse_toml_file(a.config);
    ExperimentConfig cfg = parse_experiment_config(toml);
    if (!toml.has("experiment.kind")) {
        // Infer the matching prediction from the model parameters.
        if (cfg.model.theta) {
            cfg.kind = ExperimentKind::CriticalLine;
        } else {
            const Scales s = solve_scales(cfg.model);
            if (s.alpha_eps < 1.0)
                cfg.kind = cfg.model.kind == ScaleKind::Extreme
                               ? ExperimentKind::ExtremeCrossover
                               : ExperimentKind::AgingSweep;
            else
                cfg.kind = ExperimentKind::HighTemp;
        }
    }
    const bool overlap = a.kind == "overlap";
    if (overlap && !a.rho)
        throw validation_error("flags: --kind overlap requires --rho");
    cfg.grid.clear();
    for (double t : a.t)
        for (double s : a.s)
            cfg.grid.push_back({t, s, overlap ? a.rho : std::nullopt});
    if (!a.out.empty()) cfg.out_path = a.out;
    if (a.format) cfg.format = *a.format;
    cfg.validate();
    ExperimentResult res = run_experiment(cfg);
    const auto want = overlap ? CorrelationEstimate::Kind::Overlap
                              : CorrelationEstimate::Kind::NoJump;
    std::vector<CorrelationRow> kept;
    for (auto& row : res.correlations)
        if (row.estimate.kind == want) kept.push_back(std::move(row));
    res.correlations = std::move(kept);
    emit_experiment(cfg, res);
    return 0;
}

// ---------------------------------------------------------------- limits --

int run_limits_asl(double alpha, double u) {
    json j;
    j["alpha"] = alpha;
    j["u"] = u;
    j["value"] = asl_cdf(alpha, u);
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct LevyArgs {
    double alpha = 0.0;
    double u = 0.0;
    bool extreme = false;
    std::uint64_t depth = 100'000;
    std::uint64_t seed = 1;
    double eps_bar = 1.0;
};

int run_limits_levy(const LevyArgs& a) {
    json j;
    j["alpha"] = a.alpha;
    j["u"] = a.u;
    if (!a.extreme) {
        const TailValue v = levy_tail(intermediate_tail(a.alpha), a.u);
        j["kind"] = "intermediate";
        j["value"] = v.value;
    } else {
        auto cascade = std::make_shared<const PoissonCascade>(
            build_cascade(a.alpha, a.depth, a.seed));
        const TailValue v = levy_tail(extreme_tail(cascade, a.eps_bar), a.u);
        j["kind"] = "extreme";
        j["depth"] = a.depth;
        j["seed"] = a.seed;
        j["eps_bar"] = a.eps_bar;
        j["value"] = v.value;
        j["remainder_bound"] = v.remainder_bound;
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_limits_critical(double theta, double beta, double t, double s) {
    json j;
    j["theta"] = theta;
    j["beta"] = beta;
    j["t"] = t;
    j["s"] = s;
    j["value"] = critical_prediction(theta, beta, t, s);
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- oracle --

int run_oracle_return(int n, std::uint64_t l) {
    json j;
    j["n"] = n;
    j["l"] = l;
    j["value"] = spectral_return(n, l);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_oracle_mixing(int n, long two_steps) {
    json j;
    j["n"] = n;
    j["two_steps"] = two_steps >= 0 ? two_steps : static_cast<long>(mixing_steps(n) / 2);
    j["tv"] = mixing_tv(n, two_steps);
    std::cout << j.dump(2) << "\n";
    return 0;
}

struct BruteArgs {
    int n = 8;
    double t = 1.0;
    double s = 1.0;
    double eps = 0.5;
    std::optional<double> beta;
    double alpha_target = 0.6;
    std::uint64_t paths = 2000;
    std::uint64_t seed = 1;
    std::uint64_t disorder = 0;
};

int run_oracle_brute(const BruteArgs& a) {
    ModelParams m;
    m.n = a.n;
    m.kind = ScaleKind::Intermediate;
    m.eps = a.eps;
    m.beta = a.beta ? *a.beta : beta_c(a.eps) / a.alpha_target;
    m.validate();
    const Scales scales = solve_scales(m);
    const Landscape land(m, scales, hash_key(a.seed, "disorder", a.disorder));
    const BruteCorr r = brute_force_corr(land, a.t, a.s, a.paths, a.seed, a.disorder);
    json j;
    j["n"] = a.n;
    j["t"] = a.t;
    j["s"] = a.s;
    j["beta"] = m.beta;
    j["paths"] = r.paths;
    j["successes"] = r.successes;
    j["mean"] = r.mean;
    j["stderr"] = r.se;
    std::cout << j.dump(2) << "\n";
    return 0;
}

// ------------------------------------------------------------------- run --

int run_run(const std::string& config, const std::string& out) {
    const TomlTable toml = parse_toml_file(config);
    ExperimentConfig cfg = parse_experiment_config(toml);
    if (!out.empty()) cfg.out_path = out;
    const ExperimentResult res = run_experiment(cfg);
    emit_experiment(cfg, res);
    return 0;
}

void add_model_flags(CLI::App* cmd, int& n, std::optional<double>& eps,
                     std::optional<double>& eps_bar, std::optional<double>& beta,
                     std::optional<double>& alpha_target, std::optional<double>& theta) {
    cmd->add_option("--n", n, "lattice dimension")->required();
    cmd->add_option("--eps", eps, "intermediate-scale exponent in (0, 1)");
    cmd->add_option("--extreme", eps_bar, "extreme-scale prefactor eps_bar (> 0)");
    cmd->add_option("--beta", beta, "inverse temperature");
    cmd->add_option("--alpha-target", alpha_target,
                    "choose beta so that beta_c(eps)/beta equals this");
    cmd->add_option("--theta", theta, "critical-window offset (enables critical mode)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Random hopping dynamics on the hypercube: scales, landscapes, clock "
        "processes, correlation estimators, and limit laws"};
    app.require_subcommand(1);
    std::function<int()> action;

    // scales
    ScalesArgs sa;
    auto* scales_cmd = app.add_subcommand("scales", "Resolve all time-scale quantities");
    add_model_flags(scales_cmd, sa.n, sa.eps, sa.eps_bar, sa.beta, sa.alpha_target,
                    sa.theta);
    scales_cmd->add_option("--format", sa.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    scales_cmd->callback([&] { action = [&] { return run_scales(sa); }; });

    // landscape stats
    auto* landscape_cmd = app.add_subcommand("landscape", "Landscape-level diagnostics");
    landscape_cmd->require_subcommand(1);
    StatsArgs ga;
    auto* stats_cmd =
        landscape_cmd->add_subcommand("stats", "Lattice tail/summability statistics");
    add_model_flags(stats_cmd, ga.n, ga.eps, ga.eps_bar, ga.beta, ga.alpha_target,
                    ga.theta);
    stats_cmd->add_option("--u", ga.u, "tail thresholds")->delimiter(',');
    stats_cmd->add_option("--delta", ga.delta, "truncation levels")->delimiter(',');
    stats_cmd->add_option("--seed", ga.seed, "root seed");
    stats_cmd->add_option("--disorders", ga.disorders, "landscape realizations");
    stats_cmd->add_option("--paths", ga.paths, "trajectories per disorder (chain rows)");
    stats_cmd->add_option("--landscape", ga.mode, "direct|lepage")
        ->check(CLI::IsMember({"direct", "lepage"}));
    stats_cmd->add_option("--lepage-count", ga.lepage_count, "cascade depth");
    stats_cmd->add_option("--out", ga.out, "output path (default stdout)");
    stats_cmd->add_option("--format", ga.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    stats_cmd->callback([&] { action = [&] { return run_stats(ga); }; });

    // simulate
    SimulateArgs ma;
    auto* sim_cmd = app.add_subcommand("simulate", "Record clock trajectories");
    sim_cmd->add_option("--config", ma.config, "TOML config")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--out", ma.out, "output path (default config output.path)");
    sim_cmd->callback([&] { action = [&] { return run_simulate(ma); }; });

    // correlation
    CorrelationArgs ca;
    auto* corr_cmd = app.add_subcommand("correlation", "Two-time correlation estimates");
    corr_cmd->add_option("--kind", ca.kind, "nojump|overlap")
        ->required()
        ->check(CLI::IsMember({"nojump", "overlap"}));
    corr_cmd->add_option("--t", ca.t, "base times")->delimiter(',');
    corr_cmd->add_option("--s", ca.s, "lag times")->delimiter(',');
    corr_cmd->add_option("--rho", ca.rho, "overlap window in (0,1)");
    corr_cmd->add_option("--config", ca.config, "TOML config")
        ->required()
        ->check(CLI::ExistingFile);
    corr_cmd->add_option("--out", ca.out, "output path (default config output.path)");
    corr_cmd->add_option("--format", ca.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    corr_cmd->callback([&] { action = [&] { return run_correlation(ca); }; });

    // limits
    auto* limits_cmd = app.add_subcommand("limits", "Closed-form limit objects (JSON)");
    limits_cmd->require_subcommand(1);
    double la_alpha = 0.0, la_u = 0.0;
    auto* asl_cmd = limits_cmd->add_subcommand("asl", "Generalized arcsine law CDF");
    asl_cmd->add_option("--alpha", la_alpha, "stable index in (0,1)")->required();
    asl_cmd->add_option("--u", la_u, "argument in [0,1]")->required();
    asl_cmd->callback([&] { action = [&] { return run_limits_asl(la_alpha, la_u); }; });

    LevyArgs lv;
    auto* levy_cmd = limits_cmd->add_subcommand("levy", "Levy tail nu(u, inf)");
    levy_cmd->add_option("--alpha", lv.alpha, "stable index")->required();
    levy_cmd->add_option("--u", lv.u, "tail threshold (> 0)")->required();
    levy_cmd->add_flag("--extreme", lv.extreme, "random cascade tail instead");
    levy_cmd->add_option("--depth", lv.depth, "cascade depth");
    levy_cmd->add_option("--seed", lv.seed, "cascade seed");
    levy_cmd->add_option("--eps-bar", lv.eps_bar, "extreme-scale prefactor");
    levy_cmd->callback([&] { action = [&] { return run_limits_levy(lv); }; });

    double lc_theta = 0.0, lc_beta = 0.0, lc_t = 1.0, lc_s = 1.0;
    auto* crit_cmd = limits_cmd->add_subcommand("critical", "Critical-line constant");
    crit_cmd->add_option("--theta", lc_theta, "window offset")->required();
    crit_cmd->add_option("--beta", lc_beta, "inverse temperature")->required();
    crit_cmd->add_option("--t", lc_t, "base time");
    crit_cmd->add_option("--s", lc_s, "lag time");
    crit_cmd->callback(
        [&] { action = [&] { return run_limits_critical(lc_theta, lc_beta, lc_t, lc_s); }; });

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact small-instance references");
    oracle_cmd->require_subcommand(1);
    int or_n = 8;
    std::uint64_t or_l = 0;
    auto* ret_cmd = oracle_cmd->add_subcommand("return-prob", "Spectral return probability");
    ret_cmd->add_option("--n", or_n, "dimension")->required();
    ret_cmd->add_option("--l", or_l, "step count")->required();
    ret_cmd->callback([&] { action = [&] { return run_oracle_return(or_n, or_l); }; });

    int mx_n = 8;
    long mx_two = -1;
    auto* mix_cmd = oracle_cmd->add_subcommand("mixing", "Parity-restricted mixing check");
    mix_cmd->add_option("--n", mx_n, "dimension (3..12)")->required();
    mix_cmd->add_option("--two-steps", mx_two, "two-step transitions (default theta_n/2)");
    mix_cmd->callback([&] { action = [&] { return run_oracle_mixing(mx_n, mx_two); }; });

    BruteArgs ba;
    auto* brute_cmd =
        oracle_cmd->add_subcommand("brute-corr", "Plain event-march correlation");
    brute_cmd->add_option("--n", ba.n, "dimension (<= 10)")->required();
    brute_cmd->add_option("--t", ba.t, "base time")->required();
    brute_cmd->add_option("--s", ba.s, "lag time")->required();
    brute_cmd->add_option("--eps", ba.eps, "intermediate-scale exponent");
    brute_cmd->add_option("--beta", ba.beta, "inverse temperature");
    brute_cmd->add_option("--alpha-target", ba.alpha_target,
                          "used when --beta absent");
    brute_cmd->add_option("--paths", ba.paths, "sample paths");
    brute_cmd->add_option("--seed", ba.seed, "root seed");
    brute_cmd->add_option("--disorder", ba.disorder, "disorder index");
    brute_cmd->callback([&] { action = [&] { return run_oracle_brute(ba); }; });

    // run
    std::string run_config, run_out;
    auto* run_cmd = app.add_subcommand("run", "Config-driven experiment with manifest");
    run_cmd->add_option("--config", run_config, "TOML config")
        ->required()
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--out", run_out, "override output.path");
    run_cmd->callback([&] { action = [&] { return run_run(run_config, run_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return action ? action() : 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const horizon_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
