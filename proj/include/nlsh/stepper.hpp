#pragma once

#include "nlsh/dynamics.hpp"
#include "nlsh/error.hpp"
#include "nlsh/field.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace nlsh {

enum class Scheme { ETDRK4, IMEX_BE, IMEX_CN };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);

struct StepperConfig {
    double dt = 0.05;
    Scheme scheme = Scheme::ETDRK4;
    double t_end = 100.0;
    int snapshot_stride = 200;
    int series_stride = 2;
};

/// Explicit tendency of a block of fields: tendency[k] = F_k(state).
using ExplicitFn = std::function<void(std::span<const Field> state, std::span<Field> tendency)>;

/// Advances fields obeying d/dt y_k = Lin y_k + F_k(y), where
/// Lin = mu - (1 + lap)^2 is shared by every field of the block.
///
/// ETDRK4 (periodic only) integrates Lin exactly in Fourier space with
/// contour-evaluated phi-functions. IMEX_BE solves
/// (I - dt Lin) y' = y + dt F(y); IMEX_CN is the two-stage Crank-Nicolson
/// predictor-corrector. Clamped grids factorize (I - c dt Lin) once.
class Stepper {
public:
    Stepper(ModelParams params, const Grid& grid, const StepperConfig& cfg);
    ~Stepper();
    Stepper(Stepper&&) noexcept;
    Stepper& operator=(Stepper&&) noexcept;

    const ModelParams& params() const noexcept { return params_; }
    const StepperConfig& config() const noexcept { return cfg_; }
    const Grid& grid() const noexcept { return grid_; }

    /// Generic block advance by one dt.
    void advance(std::span<Field> state, const ExplicitFn& explicit_part) const;

    /// u(t + dt) for the model. Throws BlowUpError past max|u| = 1e6.
    Field step(const Field& u, double t) const;

    /// Advances u together with tangent vectors of the linearized flow.
    void step_with_tangents(Field& u, std::span<Field> tangents, double t) const;

    /// Applies Lin to a field (exact symbol or sparse matrix).
    Field apply_linear(const Field& f) const;

private:
    struct Impl;

    ModelParams params_;
    Grid grid_;
    StepperConfig cfg_;
    std::unique_ptr<Impl> impl_;
};

struct SeriesSample {
    double t = 0.0;
    double l2 = 0.0;
    double grad_l2 = 0.0;
    double lap_l2 = 0.0;
};

struct TimedField {
    double t = 0.0;
    Field field;
};

struct Trajectory {
    std::vector<SeriesSample> series;
    std::vector<TimedField> snapshots;
    Field final_state;
    double final_time = 0.0;
};

/// Thrown by integrate on blow-up; carries everything recorded so far.
class IntegrationAborted : public BlowUpError {
public:
    IntegrationAborted(const BlowUpError& cause, std::shared_ptr<const Trajectory> partial)
        : BlowUpError(cause), partial_(std::move(partial)) {}
    const Trajectory& partial() const noexcept { return *partial_; }

private:
    std::shared_ptr<const Trajectory> partial_;
};

struct IntegrateOptions {
    bool keep_snapshots = true;
    /// Called for every snapshot as it is taken.
    std::function<void(const Field&, double)> on_snapshot;
    /// Called for every series sample as it is taken.
    std::function<void(const SeriesSample&)> on_sample;
};

SeriesSample sample_norms(const Field& u, double t);

/// Advances u0 to cfg.t_end, recording norms every series_stride steps and
/// snapshots every snapshot_stride steps (both also at t = 0 and at the end).
Trajectory integrate(const ModelParams& params, const StepperConfig& cfg, const Field& u0,
                     const IntegrateOptions& options = {});

}  // namespace nlsh
