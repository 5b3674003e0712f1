#pragma once

#include "nlsh/dynamics.hpp"
#include "nlsh/stepper.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace nlsh {

/// m perturbation fields advanced under v_t = -L(u) v, with running sums of
/// the log stretch factors collected at each orthonormalization.
struct TangentBundle {
    std::vector<Field> vectors;
    std::vector<double> log_growth;
    int reorth_period = 10;
    double elapsed = 0.0;

    int m() const noexcept { return static_cast<int>(vectors.size()); }
};

/// Gram-Schmidt (two passes) in the L2 quadrature inner product. Returns
/// log |R_jj| per column; the fields become orthonormal.
std::vector<double> orthonormalize(std::span<Field> vectors);

/// max over i != j of |<v_i, v_j>| and over i of | |v_i| - 1 |.
double gram_residual(std::span<const Field> vectors);

/// The m least stable modes of Lin = mu - (1 + lap)^2 as starting vectors:
/// real Fourier modes on periodic grids, products of discrete sine modes on
/// clamped grids. Ties are broken by wavenumber order. The returned bundle is
/// orthonormal with zero accumulated growth.
TangentBundle initial_bundle(const Grid& grid, int m, double mu, int reorth_period = 10);

/// Growth rates mu - (1 - |k|^2)^2 of the modes used by initial_bundle on a
/// periodic grid, sorted descending (one entry per real mode).
std::vector<double> periodic_symbol_spectrum(const Grid& grid, double mu, int m);

/// Term-by-term evaluation of Tr(L(u) Q_m) = sum_j <L(u) phi_j, phi_j> over an
/// orthonormal basis.
struct TraceTerms {
    double biharmonic = 0.0;  ///< sum <lap^2 phi, phi> = sum |lap phi|^2
    double laplacian = 0.0;   ///< sum 2 <lap phi, phi>
    double linear = 0.0;      ///< alpha m
    double potential = 0.0;   ///< sum <phi w, phi>, w = G * u^2 (or 3 u^2 locally)
    double coupling = 0.0;    ///< sum 2 <u (G * (u phi)), phi>; zero for the local model

    double total() const noexcept { return biharmonic + laplacian + linear + potential + coupling; }
};

/// Rejects bases with gram_residual > 1e-8.
TraceTerms trace_terms(const ModelParams& params, const Field& u, std::span<const Field> basis);
double trace_LQm(const ModelParams& params, const Field& u, std::span<const Field> basis);

/// Lower bound of the trace for eps > 1:
///   nonlocal: sum (1 - 1/eps) |lap phi_j|^2 + (1 - mu - eps + (b - 2a) |u|^2) m
///   local:    sum (1 - 1/eps) |lap phi_j|^2 + (1 - mu - eps) m
double trace_lower_bound(const ModelParams& params, double sum_lap_sq, double u_norm_sq, int m, double eps);

struct TraceSample {
    double t = 0.0;
    double trace = 0.0;
};

struct EvolveOptions {
    /// Called after every orthonormalization with the running exponents
    /// (log_growth / elapsed) and the trace on the new basis.
    std::function<void(double t, std::span<const double> exponents, double trace)> on_reorth;
    double blow_up_norm = 1e12;
};

struct EvolveResult {
    std::vector<TraceSample> trace;
    int restarts = 0;
};

/// Co-integrates the base state u and the bundle for `steps` steps with the
/// stepper's scheme; orthonormalizes every reorth_period steps. A tangent norm
/// above blow_up_norm halves reorth_period and redoes the window.
EvolveResult evolve_tangent(const Stepper& stepper, Field& u, TangentBundle& bundle, long steps, double t0,
                            const EvolveOptions& options = {});

struct LyapunovReport {
    std::vector<double> exponents;  ///< descending, 1/time
    double ky_dimension = 0.0;
    bool m_insufficient = false;    ///< partial sums never turned negative
    std::vector<TraceSample> trace_series;
    std::optional<double> analytic_threshold;
    double exponent_sum = 0.0;
    double mean_negative_trace = 0.0;  ///< time average of -Tr(L Q_m)
};

/// Kaplan-Yorke dimension j + S_j / |lambda_{j+1}| of a descending spectrum.
/// Sets insufficient when every partial sum is nonnegative.
double kaplan_yorke(std::span<const double> descending, bool& insufficient);

/// Exponents log_growth / T, sorted. Throws for T <= 0.
LyapunovReport exponents_and_ky(const TangentBundle& bundle, double T,
                                std::span<const TraceSample> trace = {},
                                std::optional<double> analytic_threshold = std::nullopt);

/// Trapezoid time average of a trace series.
double time_average(std::span<const TraceSample> trace);

nlohmann::json to_json(const LyapunovReport& r);

}  // namespace nlsh
