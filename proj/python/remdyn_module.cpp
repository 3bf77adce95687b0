// Python bindings: thin wrappers that accept plain keyword arguments and
// return dicts, so exploratory work and plotting scripts can drive the same
// code paths as the CLI.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "remdyn/dynamics.hpp"
#include "remdyn/estimators.hpp"
#include "remdyn/experiment.hpp"
#include "remdyn/landscape.hpp"
#include "remdyn/limits.hpp"
#include "remdyn/oracles.hpp"
#include "remdyn/scales.hpp"
#include "remdyn/toml.hpp"

namespace py = pybind11;
using namespace remdyn;

namespace {

ModelParams make_model(int n, double beta, std::optional<double> eps,
                       std::optional<double> eps_bar, std::optional<double> theta) {
    ModelParams m;
    m.n = n;
    m.beta = beta;
    if (eps.has_value() == eps_bar.has_value())
        throw validation_error("exactly one of eps / eps_bar required");
    if (eps) {
        m.kind = ScaleKind::Intermediate;
        m.eps = *eps;
    } else {
        m.kind = ScaleKind::Extreme;
        m.eps_bar = *eps_bar;
    }
    m.theta = theta;
    m.validate();
    return m;
}

py::dict scales_dict(const Scales& s) {
    py::dict d;
    d["a_n"] = s.a_n;
    d["log_a_n"] = s.log_a_n;
    d["c_n"] = s.c_n;
    d["log_c_n"] = s.log_c_n;
    d["alpha_eps"] = s.alpha_eps;
    d["beta_c_eps"] = s.beta_c_eps;
    d["B_n"] = s.B_n;
    d["A_n"] = s.A_n;
    d["alpha_n"] = s.alpha_n;
    d["Bbar_n"] = s.Bbar_n;
    d["theta_n_mix"] = s.theta_n_mix;
    d["critical_mode"] = s.critical_mode;
    d["theta"] = s.theta;
    return d;
}

py::dict estimate_dict(const CorrelationEstimate& e) {
    py::dict d;
    d["kind"] = e.kind == CorrelationEstimate::Kind::NoJump ? "nojump" : "overlap";
    d["t"] = e.t;
    d["s"] = e.s;
    if (e.rho) d["rho"] = *e.rho;
    d["mean"] = e.mean;
    d["stderr"] = e.se;
    d["stderr_path"] = e.se_path;
    d["stderr_disorder"] = e.se_disorder;
    d["n_paths"] = e.n_paths;
    d["n_disorders"] = e.n_disorders;
    return d;
}

EnsembleConfig make_ensemble(int n, double beta, std::optional<double> eps,
                             std::optional<double> eps_bar, std::optional<double> theta,
                             std::uint64_t paths, std::uint64_t disorders,
                             std::uint64_t seed, const std::string& start_law,
                             const std::string& landscape, std::uint64_t lepage_count) {
    EnsembleConfig cfg;
    cfg.params = make_model(n, beta, eps, eps_bar, theta);
    cfg.scales = solve_scales(cfg.params);
    cfg.n_paths = paths;
    cfg.n_disorders = disorders;
    cfg.seed = seed;
    if (start_law == "uniform") cfg.start_law = StartLaw::Uniform;
    else if (start_law == "gibbs") cfg.start_law = StartLaw::Gibbs;
    else throw validation_error("start_law must be uniform|gibbs");
    if (landscape == "direct") cfg.mode = LandscapeMode::Direct;
    else if (landscape == "lepage") cfg.mode = LandscapeMode::LePage;
    else throw validation_error("landscape must be direct|lepage");
    cfg.lepage_count = lepage_count;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_remdyn, mod) {
    mod.doc() =
        "Random hopping dynamics on the hypercube: time scales, landscapes, "
        "clock processes, correlation estimators, and limit laws.";

    py::register_exception<validation_error>(mod, "ValidationError", PyExc_ValueError);
    py::register_exception<numerical_error>(mod, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<horizon_error>(mod, "HorizonError", PyExc_RuntimeError);

    mod.def("beta_c", &beta_c, py::arg("eps"), "Critical inverse temperature.");
    mod.def("alpha_of", &alpha_of, py::arg("eps"), py::arg("beta"),
            "Stable index beta_c(eps)/beta.");
    mod.def("mixing_steps", &mixing_steps, py::arg("n"),
            "Even mixing-step count for the jump chain.");

    mod.def(
        "solve_scales",
        [](int n, double beta, std::optional<double> eps, std::optional<double> eps_bar,
           std::optional<double> theta) {
            return scales_dict(solve_scales(make_model(n, beta, eps, eps_bar, theta)));
        },
        py::arg("n"), py::arg("beta"), py::arg("eps") = std::nullopt,
        py::arg("eps_bar") = std::nullopt, py::arg("theta") = std::nullopt,
        "Resolve every derived time-scale quantity for the given parameters.");

    mod.def("asl_cdf", &asl_cdf, py::arg("alpha"), py::arg("u"),
            "Generalized arcsine law CDF Asl_alpha(u).");
    mod.def("critical_prediction", &critical_prediction, py::arg("theta"), py::arg("beta"),
            py::arg("t"), py::arg("s"), "Critical-line limit of sqrt(n) * C_n(t, s).");
    mod.def(
        "levy_tail",
        [](double alpha, double u) { return levy_tail(intermediate_tail(alpha), u).value; },
        py::arg("alpha"), py::arg("u"), "Deterministic tail u^{-alpha} alpha Gamma(alpha).");
    mod.def(
        "cascade_tail",
        [](double alpha, double u, std::uint64_t depth, std::uint64_t seed, double eps_bar) {
            auto cascade =
                std::make_shared<const PoissonCascade>(build_cascade(alpha, depth, seed));
            const TailValue v = levy_tail(extreme_tail(cascade, eps_bar), u);
            py::dict d;
            d["value"] = v.value;
            d["remainder_bound"] = v.remainder_bound;
            return d;
        },
        py::arg("alpha"), py::arg("u"), py::arg("depth") = 100000, py::arg("seed") = 1,
        py::arg("eps_bar") = 1.0, "Random cascade tail eps_bar * sum_k exp(-u/gamma_k).");
    mod.def(
        "stationary_corr",
        [](double alpha, double s, std::uint64_t depth, std::uint64_t seed) {
            const PoissonCascade cascade = build_cascade(alpha, depth, seed);
            const StationaryValue v = stationary_corr(cascade, s);
            py::dict d;
            d["value"] = v.value;
            d["weight_remainder"] = v.weight_remainder;
            return d;
        },
        py::arg("alpha"), py::arg("s"), py::arg("depth") = 100000, py::arg("seed") = 1,
        "Stationary correlation of one sampled cascade.");

    mod.def(
        "estimate_nojump",
        [](int n, double beta, double t, double s, std::optional<double> eps,
           std::optional<double> eps_bar, std::optional<double> theta, std::uint64_t paths,
           std::uint64_t disorders, std::uint64_t seed, const std::string& start_law,
           const std::string& landscape, std::uint64_t lepage_count) {
            const EnsembleConfig cfg =
                make_ensemble(n, beta, eps, eps_bar, theta, paths, disorders, seed,
                              start_law, landscape, lepage_count);
            return estimate_dict(estimate_nojump(cfg, t, s));
        },
        py::arg("n"), py::arg("beta"), py::arg("t"), py::arg("s"),
        py::arg("eps") = std::nullopt, py::arg("eps_bar") = std::nullopt,
        py::arg("theta") = std::nullopt, py::arg("paths") = 100, py::arg("disorders") = 10,
        py::arg("seed") = 0, py::arg("start_law") = "uniform",
        py::arg("landscape") = "direct", py::arg("lepage_count") = 100000,
        "No-jump two-time correlation over a disorder/path ensemble.");

    mod.def(
        "estimate_overlap",
        [](int n, double beta, double t, double s, double rho, std::optional<double> eps,
           std::optional<double> eps_bar, std::optional<double> theta, std::uint64_t paths,
           std::uint64_t disorders, std::uint64_t seed, const std::string& start_law,
           const std::string& landscape, std::uint64_t lepage_count) {
            const EnsembleConfig cfg =
                make_ensemble(n, beta, eps, eps_bar, theta, paths, disorders, seed,
                              start_law, landscape, lepage_count);
            return estimate_dict(estimate_overlap(cfg, t, s, rho));
        },
        py::arg("n"), py::arg("beta"), py::arg("t"), py::arg("s"), py::arg("rho"),
        py::arg("eps") = std::nullopt, py::arg("eps_bar") = std::nullopt,
        py::arg("theta") = std::nullopt, py::arg("paths") = 100, py::arg("disorders") = 10,
        py::arg("seed") = 0, py::arg("start_law") = "uniform",
        py::arg("landscape") = "direct", py::arg("lepage_count") = 100000,
        "Overlap two-time correlation over a disorder/path ensemble.");

    mod.def("spectral_return", &spectral_return, py::arg("n"), py::arg("l"),
            "Return probability p^l(x, x) of the cube walk.");
    mod.def("mixing_tv", &mixing_tv, py::arg("n"), py::arg("two_steps") = -1,
            "Max-relative deviation from uniform on the parity class.");
    mod.def(
        "brute_corr",
        [](int n, double eps, double beta, double t, double s, std::uint64_t paths,
           std::uint64_t seed) {
            ModelParams m;
            m.n = n;
            m.kind = ScaleKind::Intermediate;
            m.eps = eps;
            m.beta = beta;
            m.validate();
            const Scales scales = solve_scales(m);
            const Landscape land(m, scales, hash_key(seed, "disorder", 0));
            const BruteCorr r = brute_force_corr(land, t, s, paths, seed, 0);
            py::dict d;
            d["mean"] = r.mean;
            d["stderr"] = r.se;
            d["successes"] = r.successes;
            d["paths"] = r.paths;
            return d;
        },
        py::arg("n"), py::arg("eps"), py::arg("beta"), py::arg("t"), py::arg("s"),
        py::arg("paths") = 2000, py::arg("seed") = 1,
        "Plain event-march correlation oracle (n <= 10).");

    mod.def(
        "run_config",
        [](const std::string& path) {
            const TomlTable toml = parse_toml_file(path);
            ExperimentConfig cfg = parse_experiment_config(toml);
            cfg.out_path.clear();  // return text instead of writing files
            const ExperimentResult res = run_experiment(cfg);
            if (cfg.kind == ExperimentKind::Diagnostics) return diagnostics_csv(cfg, res);
            return correlation_csv(cfg, res);
        },
        py::arg("path"), "Run a TOML experiment config and return its CSV text.");
}
