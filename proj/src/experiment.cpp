#include "remdyn/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "remdyn/dynamics.hpp"
#include "remdyn/limits.hpp"

namespace remdyn {

namespace {

using nlohmann::json;

const std::map<std::string, ExperimentKind>& kind_names() {
    static const std::map<std::string, ExperimentKind> names{
        {"aging_sweep", ExperimentKind::AgingSweep},
        {"high_temp", ExperimentKind::HighTemp},
        {"critical_line", ExperimentKind::CriticalLine},
        {"extreme_crossover", ExperimentKind::ExtremeCrossover},
        {"stationary", ExperimentKind::Stationary},
        {"diagnostics", ExperimentKind::Diagnostics},
    };
    return names;
}

std::string kind_name(ExperimentKind k) {
    for (const auto& [name, kind] : kind_names())
        if (kind == k) return name;
    return "?";
}

// Reject unknown keys so config typos fail loudly instead of silently
// falling back to defaults.
void check_known_keys(const TomlTable& cfg) {
    static const std::set<std::string> known{
        "model.n", "model.eps", "model.eps_bar", "model.beta", "model.alpha_target",
        "model.theta",
        "experiment.kind", "experiment.start_law", "experiment.landscape",
        "experiment.lepage_count",
        "grid.t", "grid.s", "grid.rho",
        "ensemble.paths", "ensemble.disorders", "ensemble.seed", "ensemble.max_steps",
        "diagnostics.u", "diagnostics.delta",
        "simulate.t_max", "simulate.trajectories",
        "output.path", "output.format",
    };
    for (const auto& [key, value] : cfg.values())
        if (known.count(key) == 0)
            throw validation_error("config: unknown key '" + key + "'");
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

ModelParams parse_model(const TomlTable& cfg) {
    ModelParams m;
    m.n = static_cast<int>(cfg.get_int("model.n"));
    const bool has_eps = cfg.has("model.eps");
    const bool has_eps_bar = cfg.has("model.eps_bar");
    if (has_eps == has_eps_bar)
        throw validation_error("config: exactly one of model.eps / model.eps_bar required");
    if (has_eps) {
        m.kind = ScaleKind::Intermediate;
        m.eps = cfg.get_double("model.eps");
    } else {
        m.kind = ScaleKind::Extreme;
        m.eps_bar = cfg.get_double("model.eps_bar");
    }
    const bool has_beta = cfg.has("model.beta");
    const bool has_alpha = cfg.has("model.alpha_target");
    if (has_beta == has_alpha)
        throw validation_error("config: exactly one of model.beta / model.alpha_target required");
    if (has_beta) {
        m.beta = cfg.get_double("model.beta");
    } else {
        const double target = cfg.get_double("model.alpha_target");
        if (!(target > 0.0))
            throw validation_error("config: model.alpha_target must be positive");
        m.beta = beta_c(m.eps_effective()) / target;
    }
    if (cfg.has("model.theta")) m.theta = cfg.get_double("model.theta");
    m.validate();
    return m;
}

ExperimentConfig parse_experiment_config(const TomlTable& cfg) {
    check_known_keys(cfg);
    ExperimentConfig out;
    out.model = parse_model(cfg);

    const std::string kind = cfg.get_string("experiment.kind", "aging_sweep");
    const auto it = kind_names().find(kind);
    if (it == kind_names().end())
        throw validation_error("config: unknown experiment.kind '" + kind + "'");
    out.kind = it->second;

    const std::string law = cfg.get_string("experiment.start_law", "uniform");
    if (law == "uniform") out.start_law = StartLaw::Uniform;
    else if (law == "gibbs") out.start_law = StartLaw::Gibbs;
    else throw validation_error("config: experiment.start_law must be uniform|gibbs");

    const bool lepage_default = out.kind == ExperimentKind::ExtremeCrossover ||
                                out.kind == ExperimentKind::Stationary;
    const std::string mode =
        cfg.get_string("experiment.landscape", lepage_default ? "lepage" : "direct");
    if (mode == "direct") out.mode = LandscapeMode::Direct;
    else if (mode == "lepage") out.mode = LandscapeMode::LePage;
    else throw validation_error("config: experiment.landscape must be direct|lepage");
    out.lepage_count =
        static_cast<std::uint64_t>(cfg.get_int("experiment.lepage_count", 100'000));

    const std::vector<double> ts = cfg.get_double_array("grid.t", {1.0});
    const std::vector<double> ss = cfg.get_double_array("grid.s", {1.0});
    const std::vector<double> rhos = cfg.get_double_array("grid.rho", {});
    for (double t : ts)
        for (double s : ss) {
            if (rhos.empty()) {
                out.grid.push_back({t, s, std::nullopt});
            } else {
                for (double r : rhos) out.grid.push_back({t, s, r});
            }
        }

    out.paths = static_cast<std::uint64_t>(cfg.get_int("ensemble.paths", 1));
    out.disorders = static_cast<std::uint64_t>(cfg.get_int("ensemble.disorders", 1));
    out.seed = static_cast<std::uint64_t>(cfg.get_int("ensemble.seed", 0));
    out.max_steps = static_cast<std::uint64_t>(cfg.get_int("ensemble.max_steps", 0));

    out.diag_u = cfg.get_double_array("diagnostics.u", {1.0});
    out.diag_delta = cfg.get_double_array("diagnostics.delta", {0.1});

    out.out_path = cfg.get_string("output.path", "");
    out.format = cfg.get_string("output.format", "csv");
    out.validate();
    return out;
}

void ExperimentConfig::validate() const {
    model.validate();
    if (kind == ExperimentKind::Diagnostics) {
        if (diag_u.empty() && diag_delta.empty())
            throw validation_error("config: diagnostics requires diagnostics.u or .delta");
    } else if (grid.empty()) {
        throw validation_error("config: grid must be nonempty");
    }
    for (const auto& g : grid) {
        if (!(g.t >= 0.0)) throw validation_error("config: grid t must be nonnegative");
        if (!(g.s > 0.0)) throw validation_error("config: grid s must be positive");
        if (g.rho && !(*g.rho > 0.0 && *g.rho < 1.0))
            throw validation_error("config: grid rho must lie in (0, 1)");
    }
    if (paths < 1 || disorders < 1)
        throw validation_error("config: ensemble.paths and ensemble.disorders must be >= 1");
    if (format != "csv" && format != "json")
        throw validation_error("config: output.format must be csv|json");
    switch (kind) {
        case ExperimentKind::CriticalLine:
            if (!model.theta)
                throw validation_error("config: critical_line requires model.theta");
            break;
        case ExperimentKind::Stationary:
            if (model.kind != ScaleKind::Extreme)
                throw validation_error("config: stationary requires the extreme scale (eps_bar)");
            if (start_law != StartLaw::Gibbs)
                throw validation_error("config: stationary requires start_law = gibbs");
            if (mode != LandscapeMode::LePage)
                throw validation_error("config: stationary requires landscape = lepage "
                                       "(cascade prediction)");
            break;
        case ExperimentKind::ExtremeCrossover:
            if (model.kind != ScaleKind::Extreme)
                throw validation_error("config: extreme_crossover requires the extreme scale");
            break;
        default:
            break;
    }
}

EnsembleConfig ExperimentConfig::ensemble(const Scales& scales) const {
    EnsembleConfig ens;
    ens.params = model;
    ens.scales = scales;
    ens.n_paths = paths;
    ens.n_disorders = disorders;
    ens.seed = seed;
    ens.start_law = start_law;
    ens.mode = mode;
    ens.lepage_count = lepage_count;
    ens.max_steps = max_steps;
    return ens;
}

namespace {

// Prediction column for one grid point.
std::pair<double, std::string> predict(const ExperimentConfig& cfg, const Scales& scales,
                                       const EnsembleConfig& ens, double t, double s) {
    switch (cfg.kind) {
        case ExperimentKind::AgingSweep:
        case ExperimentKind::ExtremeCrossover: {
            const double alpha = scales.alpha_eps;
            if (!(alpha > 0.0 && alpha < 1.0))
                throw validation_error(
                    "experiment: arcsine prediction requires beta > beta_c (alpha in (0,1))");
            return {asl_cdf(alpha, t / (t + s)), "asl"};
        }
        case ExperimentKind::HighTemp:
            return {0.0, "zero"};
        case ExperimentKind::CriticalLine:
            // Predicts sqrt(n) * mean, not mean; consumers rescale.
            return {critical_prediction(scales.theta, cfg.model.beta, t, s),
                    "critical_sqrt_n"};
        case ExperimentKind::Stationary: {
            double acc = 0.0;
            for (std::uint64_t d = 0; d < cfg.disorders; ++d) {
                const Landscape land = build_ensemble_disorder(ens, d);
                acc += stationary_corr(*land.cascade, s).value;
            }
            return {acc / static_cast<double>(cfg.disorders), "stationary"};
        }
        case ExperimentKind::Diagnostics:
            break;
    }
    return {0.0, "none"};
}

std::vector<CorrelationRow> run_correlations(const ExperimentConfig& cfg,
                                             const Scales& scales) {
    const EnsembleConfig ens = cfg.ensemble(scales);
    std::vector<CorrelationRow> rows;
    // Row layout: grid order; a no-jump row per point, then an overlap row
    // when rho is present.
    std::vector<std::size_t> nojump_row(cfg.grid.size());
    std::vector<std::size_t> overlap_row(cfg.grid.size(), SIZE_MAX);
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        nojump_row[i] = rows.size();
        rows.emplace_back();
        if (cfg.grid[i].rho) {
            overlap_row[i] = rows.size();
            rows.emplace_back();
        }
    }
    // Group by t so one walk per path serves the whole s-grid at that t.
    std::map<double, std::vector<std::size_t>> by_t;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) by_t[cfg.grid[i].t].push_back(i);
    for (const auto& [t, idxs] : by_t) {
        std::vector<double> ss;
        ss.reserve(idxs.size());
        for (std::size_t i : idxs) ss.push_back(cfg.grid[i].s);
        const auto ests = estimate_nojump_sweep(ens, t, ss);
        for (std::size_t k = 0; k < idxs.size(); ++k)
            rows[nojump_row[idxs[k]]].estimate = ests[k];
    }
    std::map<std::pair<double, double>, std::vector<std::size_t>> by_t_rho;
    for (std::size_t i = 0; i < cfg.grid.size(); ++i)
        if (cfg.grid[i].rho) by_t_rho[{cfg.grid[i].t, *cfg.grid[i].rho}].push_back(i);
    for (const auto& [key, idxs] : by_t_rho) {
        std::vector<double> ss;
        ss.reserve(idxs.size());
        for (std::size_t i : idxs) ss.push_back(cfg.grid[i].s);
        const auto ests = estimate_overlap_sweep(ens, key.first, ss, key.second);
        for (std::size_t k = 0; k < idxs.size(); ++k)
            rows[overlap_row[idxs[k]]].estimate = ests[k];
    }
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
        const auto [pred, pk] =
            predict(cfg, scales, ens, cfg.grid[i].t, cfg.grid[i].s);
        rows[nojump_row[i]].prediction = pred;
        rows[nojump_row[i]].prediction_kind = pk;
        if (overlap_row[i] != SIZE_MAX) {
            rows[overlap_row[i]].prediction = pred;
            rows[overlap_row[i]].prediction_kind = pk;
        }
    }
    return rows;
}

std::vector<DiagnosticRow> run_diagnostics(const ExperimentConfig& cfg, const Scales& scales) {
    const EnsembleConfig ens = cfg.ensemble(scales);
    std::vector<DiagnosticRow> rows;
    const auto D = static_cast<double>(cfg.disorders);
    // Mean and disorder-level standard error of one scalar per disorder.
    auto disorder_stat = [&](const std::string& name, double x,
                             auto&& per_disorder) {
        double sum = 0.0, sumsq = 0.0;
        for (std::uint64_t d = 0; d < cfg.disorders; ++d) {
            const double v = per_disorder(d);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / D;
        const double var = (cfg.disorders > 1)
                               ? std::max(0.0, (sumsq / D - mean * mean) * D / (D - 1.0))
                               : 0.0;
        rows.push_back({name, x, mean, std::sqrt(var / D)});
    };
    for (double u : cfg.diag_u) {
        disorder_stat("nu", u, [&](std::uint64_t d) {
            return lattice_nu(build_ensemble_disorder(ens, d), u).value;
        });
        disorder_stat("sigma", u, [&](std::uint64_t d) {
            return lattice_sigma(build_ensemble_disorder(ens, d), u).value;
        });
    }
    disorder_stat("m", 1.0, [&](std::uint64_t d) {
        return lattice_m(build_ensemble_disorder(ens, d)).value;
    });
    for (double delta : cfg.diag_delta) {
        disorder_stat("lambda", delta, [&](std::uint64_t d) {
            return lattice_lambda(build_ensemble_disorder(ens, d), delta, LambdaKind::A3).value;
        });
        disorder_stat("lambdabar", delta, [&](std::uint64_t d) {
            return lattice_lambda(build_ensemble_disorder(ens, d), delta, LambdaKind::A3prime)
                .value;
        });
    }
    // Chain-level condition diagnostics at t = 1, averaged over paths too.
    const auto steps = static_cast<std::uint64_t>(
        std::max(1.0, std::floor(scales.a_n * 1.0)));
    for (double u : cfg.diag_u) {
        disorder_stat("chain_nu", u, [&](std::uint64_t d) {
            const Landscape land = build_ensemble_disorder(ens, d);
            double acc = 0.0;
            for (std::uint64_t p = 0; p < cfg.paths; ++p) {
                const auto traj =
                    run_trajectory(land, steps, cfg.start_law, hash_key(cfg.seed, d, p));
                acc += chain_diagnostics(land, traj, u, 1.0).nu;
            }
            return acc / static_cast<double>(cfg.paths);
        });
        disorder_stat("chain_sigma", u, [&](std::uint64_t d) {
            const Landscape land = build_ensemble_disorder(ens, d);
            double acc = 0.0;
            for (std::uint64_t p = 0; p < cfg.paths; ++p) {
                const auto traj =
                    run_trajectory(land, steps, cfg.start_law, hash_key(cfg.seed, d, p));
                acc += chain_diagnostics(land, traj, u, 1.0).sigma;
            }
            return acc / static_cast<double>(cfg.paths);
        });
    }
    return rows;
}

double model_eps_column(const ModelParams& m) {
    return m.kind == ScaleKind::Intermediate ? m.eps : m.eps_bar;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.model = cfg.model;
    result.scales = solve_scales(cfg.model);
    if (cfg.kind == ExperimentKind::Diagnostics)
        result.diagnostics = run_diagnostics(cfg, result.scales);
    else
        result.correlations = run_correlations(cfg, result.scales);
    return result;
}

std::string correlation_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::ostringstream out;
    out << "kind,n,eps,beta,theta,t,s,rho,mean,stderr_path,stderr_disorder,"
           "n_paths,n_disorders,prediction,prediction_kind\n";
    for (const auto& row : result.correlations) {
        const auto& e = row.estimate;
        out << (e.kind == CorrelationEstimate::Kind::NoJump ? "nojump" : "overlap") << ','
            << cfg.model.n << ',' << format_double(model_eps_column(cfg.model)) << ','
            << format_double(cfg.model.beta) << ','
            << (cfg.model.theta ? format_double(*cfg.model.theta) : "") << ','
            << format_double(e.t) << ',' << format_double(e.s) << ','
            << (e.rho ? format_double(*e.rho) : "") << ',' << format_double(e.mean) << ','
            << format_double(e.se_path) << ',' << format_double(e.se_disorder) << ','
            << e.n_paths << ',' << e.n_disorders << ',' << format_double(row.prediction)
            << ',' << row.prediction_kind << '\n';
    }
    return out.str();
}

std::string diagnostics_csv(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::ostringstream out;
    out << "quantity,u_or_delta,value,stderr,n,eps,beta,seed\n";
    for (const auto& row : result.diagnostics) {
        out << row.quantity << ',' << format_double(row.u_or_delta) << ','
            << format_double(row.value) << ',' << format_double(row.se) << ','
            << cfg.model.n << ',' << format_double(model_eps_column(cfg.model)) << ','
            << format_double(cfg.model.beta) << ',' << cfg.seed << '\n';
    }
    return out.str();
}

namespace {

json scales_json(const Scales& s) {
    json j;
    j["a_n"] = s.a_n;
    j["log_a_n"] = s.log_a_n;
    if (std::isfinite(s.c_n)) j["c_n"] = s.c_n;
    else j["c_n"] = "inf";
    j["log_c_n"] = s.log_c_n;
    j["alpha_eps"] = s.alpha_eps;
    j["beta_c_eps"] = s.beta_c_eps;
    j["B_n"] = s.B_n;
    j["A_n"] = s.A_n;
    j["alpha_n"] = s.alpha_n;
    j["Bbar_n"] = s.Bbar_n;
    j["theta_n_mix"] = s.theta_n_mix;
    j["critical_mode"] = s.critical_mode;
    if (s.critical_mode) j["theta"] = s.theta;
    return j;
}

json config_json(const ExperimentConfig& cfg) {
    json j;
    j["model"]["n"] = cfg.model.n;
    j["model"]["beta"] = cfg.model.beta;
    if (cfg.model.kind == ScaleKind::Intermediate) j["model"]["eps"] = cfg.model.eps;
    else j["model"]["eps_bar"] = cfg.model.eps_bar;
    if (cfg.model.theta) j["model"]["theta"] = *cfg.model.theta;
    j["experiment"]["kind"] = kind_name(cfg.kind);
    j["experiment"]["start_law"] = cfg.start_law == StartLaw::Gibbs ? "gibbs" : "uniform";
    j["experiment"]["landscape"] =
        cfg.mode == LandscapeMode::LePage ? "lepage" : "direct";
    j["experiment"]["lepage_count"] = cfg.lepage_count;
    json grid = json::array();
    for (const auto& g : cfg.grid) {
        json p;
        p["t"] = g.t;
        p["s"] = g.s;
        if (g.rho) p["rho"] = *g.rho;
        grid.push_back(p);
    }
    j["grid"] = grid;
    j["ensemble"]["paths"] = cfg.paths;
    j["ensemble"]["disorders"] = cfg.disorders;
    j["ensemble"]["seed"] = cfg.seed;
    j["ensemble"]["max_steps"] = cfg.max_steps;
    j["output"]["path"] = cfg.out_path;
    j["output"]["format"] = cfg.format;
    return j;
}

}  // namespace

std::string scales_json_text(const Scales& s) { return scales_json(s).dump(2) + "\n"; }

std::string result_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    json j;
    j["config"] = config_json(cfg);
    j["scales"] = scales_json(result.scales);
    json rows = json::array();
    for (const auto& row : result.correlations) {
        const auto& e = row.estimate;
        json r;
        r["kind"] = e.kind == CorrelationEstimate::Kind::NoJump ? "nojump" : "overlap";
        r["t"] = e.t;
        r["s"] = e.s;
        if (e.rho) r["rho"] = *e.rho;
        r["mean"] = e.mean;
        r["stderr"] = e.se;
        r["stderr_path"] = e.se_path;
        r["stderr_disorder"] = e.se_disorder;
        r["n_paths"] = e.n_paths;
        r["n_disorders"] = e.n_disorders;
        r["prediction"] = row.prediction;
        r["prediction_kind"] = row.prediction_kind;
        rows.push_back(r);
    }
    for (const auto& row : result.diagnostics) {
        json r;
        r["quantity"] = row.quantity;
        r["u_or_delta"] = row.u_or_delta;
        r["value"] = row.value;
        r["stderr"] = row.se;
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string manifest_json(const ExperimentConfig& cfg, const ExperimentResult& result) {
    json j;
    j["library"] = "remdyn";
    j["version"] = "1.0.0";
    j["config"] = config_json(cfg);
    j["scales"] = scales_json(result.scales);
    j["seeding"] = {
        {"disorder", "hash(root, \"disorder\", d)"},
        {"path", "hash(root, d, p)"},
    };
    return j.dump(2) + "\n";
}

std::string emit_experiment(const ExperimentConfig& cfg, const ExperimentResult& result) {
    std::string text;
    if (cfg.format == "json") {
        text = result_json(cfg, result);
    } else if (cfg.kind == ExperimentKind::Diagnostics) {
        text = diagnostics_csv(cfg, result);
    } else {
        text = correlation_csv(cfg, result);
    }
    if (cfg.out_path.empty()) {
        std::cout << text;
        return "-";
    }
    const std::filesystem::path target(cfg.out_path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw validation_error("output: cannot write '" + cfg.out_path + "'");
    out << text;
    std::ofstream manifest(cfg.out_path + ".manifest.json", std::ios::binary);
    manifest << manifest_json(cfg, result);
    return cfg.out_path;
}

}  // namespace remdyn
