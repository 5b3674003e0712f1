#pragma once

#include "nlsh/dynamics.hpp"
#include "nlsh/stepper.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nlsh {

enum class BoundStatus { Satisfied, Violated, Inconclusive, NotApplicable };

std::string_view to_string(BoundStatus s);

/// Outcome of checking one inequality along a recorded trajectory.
/// worst_margin is min over samples of (bound - observed).
struct BoundReport {
    std::string bound_name;
    BoundStatus status = BoundStatus::Inconclusive;
    bool satisfied = false;
    double worst_margin = 0.0;
    double time_of_worst = 0.0;
    std::size_t samples = 0;
    double tolerance = 0.0;
    std::vector<std::pair<std::string, double>> extras;
    std::string note;

    std::optional<double> extra(std::string_view key) const;
};

/// One line, space separated key=value pairs.
std::string to_key_value(const BoundReport& r);
nlohmann::json to_json(const BoundReport& r);

/// Default slack relative to |u0|^2: 1e-6 on periodic grids, 1e-3 on clamped.
double default_slack(Boundary bc) noexcept;

/// |u0|^2 exp(-2 mu t) + mu / b.
double lemma1_envelope(double t, double u0_sq, double mu, double b);

/// Checks |u(t)|^2 <= |u0|^2 exp(-2 mu t) + mu/b with tolerance
/// slack * |u0|^2. Also reports tail_max (max |u| over the last 20% of
/// samples) and radius = sqrt(mu/b). mu <= 0 yields NotApplicable.
BoundReport check_lemma1(std::span<const SeriesSample> series, double mu, double b, double slack);

/// tail_max <= factor * sqrt(mu/b) over t in [0.8 t_end, t_end]. A miss is
/// reported as Inconclusive when the decay envelope is still above the limit
/// at 0.8 t_end.
BoundReport check_absorbing_radius(std::span<const SeriesSample> series, double mu, double b,
                                   double factor = 1.05);

/// mu <= 0: |u| must be non-increasing (relative slack 1e-9) after the first
/// 10% of the horizon.
BoundReport check_decay(std::span<const SeriesSample> series, double mu);

/// Minimizer over beta >= 0 of the window margin
///   |u(t)|^2 - |u(t+1)|^2 - I_lap - beta I_u + (2 + 2mu + beta)^2 / (8 b),
/// where I_lap, I_u are the window integrals of |lap u|^2 and |u|^2.
struct WindowMargin {
    double beta = 0.0;
    double margin = 0.0;
};
WindowMargin optimal_window_margin(double u_start_sq, double u_end_sq, double int_lap_sq,
                                   double int_u_sq, double mu, double b);

/// (2 + 2mu + beta)^2 / (8 b).
double gronwall_window_constant(double mu, double b, double beta);

/// Uniform-in-time boundedness of |lap u|, operationalized: the window
/// integral inequality above on every unit window (violation => Violated) and
/// stabilization of unit-window maxima of |lap u| to within 5% over the last
/// five windows (failure => Inconclusive). Fewer than two windows =>
/// Inconclusive.
BoundReport check_h2_bound(std::span<const SeriesSample> series, double mu, double b, double slack);

/// First recorded time after which |u| <= radius for the rest of the series.
std::optional<double> absorbing_entry(std::span<const SeriesSample> series, double radius);

/// Crossing time of the decay envelope with radius^2; nullopt if the envelope
/// never gets there (radius^2 <= mu / b).
std::optional<double> envelope_entry_time(double u0_norm, double radius, double mu, double b);

/// <rhs(u), u> <= -(alpha - 1) |u|^2 - b |u|^4 at every snapshot.
BoundReport check_dissipation(const ModelParams& params, std::span<const TimedField> snapshots,
                              double b, double slack);

}  // namespace nlsh
