#pragma once

#include "nlsh/dynamics.hpp"
#include "nlsh/initial.hpp"
#include "nlsh/kernel.hpp"
#include "nlsh/stepper.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nlsh {

// Run configuration grammar (line oriented):
//
//   # comment                   blank lines and '#' comments are ignored
//   [section]                   one of: model grid stepper ic output analysis
//   key = value                 keys are unique within a section
//
// Real values accept a trailing "pi" factor: "16pi", "16*pi", "pi".
// Booleans accept on/off, true/false, yes/no, 1/0. Unknown sections and keys
// are errors. model.mu is the only required key.

struct ModelConfig {
    ModelVariant variant = ModelVariant::Nonlocal;
    double mu = 0.0;
    std::string kernel = "gaussian_floor b=1 a=3 sigma=2";
    std::optional<ConvolutionMode> convolution;  ///< empty: follow the boundary mode
    bool nonlinearity = true;
};

struct GridConfig {
    int nx = 128;
    int ny = 128;
    double lx = 0.0;  ///< 0 means the default 16 pi
    double ly = 0.0;
    Boundary bc = Boundary::Periodic;
};

struct OutputConfig {
    std::string directory;  ///< empty: $SH2D_OUT, else ./runs
    bool csv = true;
    bool sh2d = true;
    bool json = true;
};

struct AnalysisConfig {
    bool lemma1 = true;
    bool h2 = true;
    bool lyapunov = false;
    int lyapunov_m = 24;
    int reorth_period = 10;
    double lyapunov_transient = 50.0;
    double lyapunov_time = 50.0;
    bool theory = true;
    double theory_C = 1.0;
    std::optional<double> slack;  ///< empty: 1e-6 periodic, 1e-3 clamped
};

struct RunConfig {
    ModelConfig model;
    GridConfig grid;
    StepperConfig stepper;
    bool scheme_explicit = false;
    InitialSpec ic;
    OutputConfig output;
    AnalysisConfig analysis;

    Grid make_grid() const;
    Kernel make_kernel() const;
    ConvolutionMode convolution_mode() const;
    /// Builds the kernel cache for the nonlocal variant.
    ModelParams make_params() const;
    double slack() const;
};

/// Parses and validates a configuration. `overrides` are "section.key=value"
/// strings applied on top of the text (they may replace keys from the text).
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Canonical text form with every key spelled out; parse_config(to_text(c))
/// reproduces c.
std::string to_text(const RunConfig& config);

/// Reads a real value with the optional "pi" suffix.
double parse_real(std::string_view text);

}  // namespace nlsh
