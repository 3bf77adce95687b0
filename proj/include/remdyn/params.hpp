// Model parameterization and library-wide error taxonomy.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace remdyn {

// Invalid user input (bad parameters, malformed config). CLI exit code 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (bracket not found, overflow, horizon). CLI exit code 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A time query or step budget ran past the simulated horizon.
struct horizon_error : numerical_error {
    using numerical_error::numerical_error;
};

enum class ScaleKind { Intermediate, Extreme };

// Static description of one model instance: dimension, temperature, and the
// observation time-scale family. `theta` switches scale resolution to the
// critical-line mode (only meaningful at beta = beta_c(eps)).
struct ModelParams {
    int n = 16;                  // hypercube dimension, >= 2
    double beta = 1.0;           // inverse temperature; 0 allowed as a flat-field diagnostic
    ScaleKind kind = ScaleKind::Intermediate;
    double eps = 0.5;            // intermediate exponent, in (0, 1]
    double eps_bar = 1.0;        // extreme prefactor, > 0
    std::optional<double> theta; // critical-line offset

    // Effective epsilon for critical temperature purposes: extreme scales sit
    // in the eps = 1 family.
    double eps_effective() const { return kind == ScaleKind::Intermediate ? eps : 1.0; }

    void validate() const {
        if (n < 2) throw validation_error("ModelParams: n must be >= 2");
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw validation_error("ModelParams: beta must be finite and >= 0");
        if (kind == ScaleKind::Intermediate) {
            if (!(eps > 0.0) || !(eps <= 1.0))
                throw validation_error("ModelParams: eps must lie in (0, 1]");
        } else {
            if (!(eps_bar > 0.0) || !std::isfinite(eps_bar))
                throw validation_error("ModelParams: eps_bar must be positive and finite");
        }
        if (theta && !(beta > 0.0))
            throw validation_error("ModelParams: theta requires beta > 0");
        if (theta && !std::isfinite(*theta))
            throw validation_error("ModelParams: theta must be finite");
    }
};

}  // namespace remdyn
