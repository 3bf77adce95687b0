// Config-driven experiment orchestration: parse a TOML config, resolve the
// scales, fan the ensemble out, and emit result rows plus a manifest that
// makes every number recomputable.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "remdyn/estimators.hpp"
#include "remdyn/params.hpp"
#include "remdyn/scales.hpp"
#include "remdyn/toml.hpp"

namespace remdyn {

enum class ExperimentKind {
    AgingSweep,
    HighTemp,
    CriticalLine,
    ExtremeCrossover,
    Stationary,
    Diagnostics,
};

struct GridPoint {
    double t = 1.0;
    double s = 1.0;
    std::optional<double> rho;
};

struct ExperimentConfig {
    ModelParams model;
    ExperimentKind kind = ExperimentKind::AgingSweep;
    StartLaw start_law = StartLaw::Uniform;
    LandscapeMode mode = LandscapeMode::Direct;
    std::uint64_t lepage_count = 100'000;
    std::vector<GridPoint> grid;
    std::uint64_t paths = 1;
    std::uint64_t disorders = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;
    std::vector<double> diag_u{1.0};      // diagnostics: u grid
    std::vector<double> diag_delta{0.1};  // diagnostics: delta grid
    std::string out_path;                 // empty = stdout
    std::string format = "csv";

    void validate() const;
    EnsembleConfig ensemble(const Scales& scales) const;
};

// Model parameters from [model]: n, eps | eps_bar, beta | alpha_target, theta.
ModelParams parse_model(const TomlTable& cfg);
ExperimentConfig parse_experiment_config(const TomlTable& cfg);

// One output row in the fixed correlation schema.
struct CorrelationRow {
    CorrelationEstimate estimate;
    double prediction = 0.0;
    std::string prediction_kind;  // asl | zero | critical_sqrt_n | stationary | none
};

// One output row in the landscape-stats schema.
struct DiagnosticRow {
    std::string quantity;
    double u_or_delta = 0.0;
    double value = 0.0;
    double se = 0.0;
};

struct ExperimentResult {
    ModelParams model;
    Scales scales;
    std::vector<CorrelationRow> correlations;
    std::vector<DiagnosticRow> diagnostics;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Serialization. Correlation CSV columns: kind,n,eps,beta,theta,t,s,rho,mean,
// stderr_path,stderr_disorder,n_paths,n_disorders,prediction,prediction_kind.
// Diagnostic CSV columns: quantity,u_or_delta,value,stderr,n,eps,beta,seed.
std::string correlation_csv(const ExperimentConfig& cfg, const ExperimentResult& result);
std::string diagnostics_csv(const ExperimentConfig& cfg, const ExperimentResult& result);
std::string result_json(const ExperimentConfig& cfg, const ExperimentResult& result);
std::string manifest_json(const ExperimentConfig& cfg, const ExperimentResult& result);

// Shortest round-tripping rendering, used everywhere numbers reach text
// (byte-stable reruns).
std::string format_double(double v);

// All resolved scale fields as a pretty-printed JSON object.
std::string scales_json_text(const Scales& s);

// Write `text` to cfg.out_path (or stdout when empty) and the manifest next
// to it; returns the resolved output path ("-" for stdout).
std::string emit_experiment(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace remdyn
