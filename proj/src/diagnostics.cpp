#include "nlsh/diagnostics.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nlsh {
namespace {

BoundReport make_report(std::string name) {
    BoundReport r;
    r.bound_name = std::move(name);
    r.worst_margin = std::numeric_limits<double>::infinity();
    return r;
}

void note_margin(BoundReport& r, double margin, double t) {
    if (margin < r.worst_margin) {
        r.worst_margin = margin;
        r.time_of_worst = t;
    }
}

void finish(BoundReport& r) {
    r.satisfied = r.worst_margin >= -r.tolerance;
    r.status = r.satisfied ? BoundStatus::Satisfied : BoundStatus::Violated;
}

// Linear interpolation of a sampled quantity.
template <typename Get>
double interpolate(std::span<const SeriesSample> s, double t, Get get) {
    if (t <= s.front().t) return get(s.front());
    if (t >= s.back().t) return get(s.back());
    const auto it = std::lower_bound(s.begin(), s.end(), t,
                                     [](const SeriesSample& x, double tt) { return x.t < tt; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return (1.0 - w) * get(lo) + w * get(hi);
}

// Trapezoid rule over [t0, t1] using the samples inside plus interpolated ends.
// With lower = true each panel uses its smaller endpoint instead, which bounds
// the integral from below wherever the sampled quantity is monotone per panel.
template <typename Get>
double integrate(std::span<const SeriesSample> s, double t0, double t1, Get get, bool lower = false) {
    std::vector<std::pair<double, double>> pts;
    pts.emplace_back(t0, interpolate(s, t0, get));
    for (const auto& x : s) {
        if (x.t > t0 && x.t < t1) pts.emplace_back(x.t, get(x));
    }
    pts.emplace_back(t1, interpolate(s, t1, get));
    double acc = 0.0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double h = pts[k].first - pts[k - 1].first;
        acc += lower ? std::min(pts[k].second, pts[k - 1].second) * h : 0.5 * (pts[k].second + pts[k - 1].second) * h;
    }
    return acc;
}

void require_series(std::span<const SeriesSample> series, const char* what) {
    if (series.empty()) throw InvalidArgument(std::string(what) + ": empty series");
}

}  // namespace

std::string_view to_string(BoundStatus s) {
    switch (s) {
    case BoundStatus::Satisfied: return "satisfied";
    case BoundStatus::Violated: return "violated";
    case BoundStatus::Inconclusive: return "inconclusive";
    case BoundStatus::NotApplicable: return "not_applicable";
    }
    return "?";
}

std::optional<double> BoundReport::extra(std::string_view key) const {
    for (const auto& [k, v] : extras) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string to_key_value(const BoundReport& r) {
    std::ostringstream out;
    out.precision(10);
    out << "bound=" << r.bound_name << " status=" << to_string(r.status)
        << " satisfied=" << (r.satisfied ? "true" : "false") << " worst_margin=" << r.worst_margin
        << " time_of_worst=" << r.time_of_worst << " samples=" << r.samples
        << " tolerance=" << r.tolerance;
    for (const auto& [k, v] : r.extras) out << ' ' << k << '=' << v;
    if (!r.note.empty()) out << " note=\"" << r.note << '"';
    return out.str();
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json j;
    j["bound_name"] = r.bound_name;
    j["status"] = std::string(to_string(r.status));
    j["satisfied"] = r.satisfied;
    j["worst_margin"] = std::isfinite(r.worst_margin) ? nlohmann::json(r.worst_margin) : nlohmann::json();
    j["time_of_worst"] = r.time_of_worst;
    j["samples"] = r.samples;
    j["tolerance"] = r.tolerance;
    for (const auto& [k, v] : r.extras) j["extras"][k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

double default_slack(Boundary bc) noexcept { return bc == Boundary::Periodic ? 1e-6 : 1e-3; }

double lemma1_envelope(double t, double u0_sq, double mu, double b) {
    return u0_sq * std::exp(-2.0 * mu * t) + mu / b;
}

BoundReport check_lemma1(std::span<const SeriesSample> series, double mu, double b, double slack) {
    require_series(series, "check_lemma1");
    BoundReport r = make_report("lemma1_envelope");
    r.samples = series.size();
    if (!(mu > 0.0)) {
        r.status = BoundStatus::NotApplicable;
        r.satisfied = true;
        r.worst_margin = 0.0;
        r.note = "mu <= 0: use the decay check";
        return r;
    }
    if (!(b > 0.0)) throw InvalidArgument("check_lemma1: b must be positive");
    const double u0_sq = series.front().l2 * series.front().l2;
    r.tolerance = slack * u0_sq;
    for (const auto& s : series) note_margin(r, lemma1_envelope(s.t, u0_sq, mu, b) - s.l2 * s.l2, s.t);
    finish(r);

    const double t_end = series.back().t;
    double tail = 0.0;
    for (const auto& s : series) {
        if (s.t >= 0.8 * t_end) tail = std::max(tail, s.l2);
    }
    const double radius = std::sqrt(mu / b);
    r.extras = {{"tail_max", tail}, {"radius", radius}, {"tail_ratio", tail / radius}};
    return r;
}

BoundReport check_absorbing_radius(std::span<const SeriesSample> series, double mu, double b, double factor) {
    require_series(series, "check_absorbing_radius");
    BoundReport r = make_report("absorbing_radius");
    if (!(mu > 0.0)) {
        r.status = BoundStatus::NotApplicable;
        r.satisfied = true;
        r.worst_margin = 0.0;
        r.note = "mu <= 0: use the decay check";
        return r;
    }
    const double radius = std::sqrt(mu / b);
    const double limit = factor * radius;
    const double t_end = series.back().t;
    double tail = 0.0;
    for (const auto& s : series) {
        if (s.t < 0.8 * t_end) continue;
        ++r.samples;
        tail = std::max(tail, s.l2);
        note_margin(r, limit - s.l2, s.t);
    }
    finish(r);
    r.extras = {{"tail_max", tail}, {"radius", radius}, {"limit", limit}};
    // The decay envelope itself may still be above the limit over the tail;
    // nothing is claimed there yet.
    const auto entry = envelope_entry_time(series.front().l2, limit, mu, b);
    if (!r.satisfied && (!entry || *entry > 0.8 * t_end)) {
        r.status = BoundStatus::Inconclusive;
        r.note = "horizon too short: the decay envelope has not reached the limit by 0.8 t_end";
    }
    return r;
}

BoundReport check_decay(std::span<const SeriesSample> series, double mu) {
    require_series(series, "check_decay");
    BoundReport r = make_report("l2_decay");
    r.samples = series.size();
    if (mu > 0.0) {
        r.status = BoundStatus::NotApplicable;
        r.satisfied = true;
        r.worst_margin = 0.0;
        r.note = "mu > 0: solutions do not decay";
        return r;
    }
    const double t_start = series.front().t + 0.1 * (series.back().t - series.front().t);
    const SeriesSample* prev = nullptr;
    for (const auto& s : series) {
        if (s.t < t_start) continue;
        if (prev != nullptr) {
            // Margin relative to the previous sample; positive means decrease.
            note_margin(r, prev->l2 * (1.0 + 1e-9) - s.l2, s.t);
        }
        prev = &s;
    }
    if (prev == nullptr || !std::isfinite(r.worst_margin)) r.worst_margin = 0.0;
    finish(r);
    r.extras = {{"initial_l2", series.front().l2}, {"final_l2", series.back().l2}};
    return r;
}

double gronwall_window_constant(double mu, double b, double beta) {
    const double c = 2.0 + 2.0 * mu + beta;
    return c * c / (8.0 * b);
}

WindowMargin optimal_window_margin(double u_start_sq, double u_end_sq, double int_lap_sq,
                                   double int_u_sq, double mu, double b) {
    // margin(beta) is convex in beta with stationary point 4 b I_u - (2 + 2mu).
    const double beta = std::max(0.0, 4.0 * b * int_u_sq - (2.0 + 2.0 * mu));
    const double margin = u_start_sq - u_end_sq - int_lap_sq - beta * int_u_sq +
                          gronwall_window_constant(mu, b, beta);
    return {beta, margin};
}

BoundReport check_h2_bound(std::span<const SeriesSample> series, double mu, double b, double slack) {
    require_series(series, "check_h2_bound");
    BoundReport r = make_report("h2_uniform_bound");
    r.samples = series.size();
    const double t0 = series.front().t;
    const double t1 = series.back().t;
    const int windows = static_cast<int>(std::floor(t1 - t0 + 1e-9));
    if (windows < 2) {
        r.status = BoundStatus::Inconclusive;
        r.worst_margin = 0.0;
        r.note = "series shorter than two unit windows";
        return r;
    }
    auto l2sq = [](const SeriesSample& s) { return s.l2 * s.l2; };
    auto lapsq = [](const SeriesSample& s) { return s.lap_l2 * s.lap_l2; };
    const double u0_sq = l2sq(series.front());
    r.tolerance = slack * std::max(u0_sq, 1.0);

    std::vector<double> window_max;
    double beta_at_worst = 0.0;
    int unresolved = 0;
    for (int k = 0; k < windows; ++k) {
        const double a = t0 + k;
        const double e = a + 1.0;
        double wm = 0.0;
        for (const auto& s : series) {
            if (s.t >= a && s.t <= e) wm = std::max(wm, s.lap_l2);
        }
        window_max.push_back(wm);
        const double start = interpolate(series, a, l2sq);
        const double end = interpolate(series, e, l2sq);
        const auto m = optimal_window_margin(start, end, integrate(series, a, e, lapsq),
                                             integrate(series, a, e, l2sq), mu, b);
        // A trapezoid miss that the lower quadrature does not confirm is a
        // sampling artifact, not evidence against the bound.
        if (m.margin < -r.tolerance) {
            const auto lo = optimal_window_margin(start, end, integrate(series, a, e, lapsq, true),
                                                  integrate(series, a, e, l2sq, true), mu, b);
            if (lo.margin >= -r.tolerance) {
                ++unresolved;
                continue;
            }
        }
        if (m.margin < r.worst_margin) beta_at_worst = m.beta;
        note_margin(r, m.margin, a);
    }
    if (unresolved == windows) r.worst_margin = 0.0;
    finish(r);

    const std::size_t last = std::min<std::size_t>(5, window_max.size());
    const auto tail_begin = window_max.end() - static_cast<std::ptrdiff_t>(last);
    const double hi = *std::max_element(tail_begin, window_max.end());
    const double lo = *std::min_element(tail_begin, window_max.end());
    const double spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
    const bool stabilized = spread <= 0.05;
    r.extras = {{"windows", static_cast<double>(windows)},
                {"lap_sup_tail", hi},
                {"window_spread", spread},
                {"beta_at_worst", beta_at_worst},
                {"unresolved_windows", static_cast<double>(unresolved)}};
    if (r.satisfied && unresolved > 0) {
        r.status = BoundStatus::Inconclusive;
        r.note = std::to_string(unresolved) + " window(s) not resolved by the sampling interval; lower series_stride";
    } else if (r.satisfied && !stabilized) {
        r.status = BoundStatus::Inconclusive;
        r.note = "window maxima of |lap u| have not stabilized to 5%";
    } else if (r.satisfied) {
        r.note = "finite-horizon check: window maxima stabilized to 5%";
    }
    return r;
}

std::optional<double> absorbing_entry(std::span<const SeriesSample> series, double radius) {
    if (series.empty()) return std::nullopt;
    std::optional<std::size_t> last_outside;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (series[k].l2 > radius) last_outside = k;
    }
    if (!last_outside) return series.front().t;
    if (*last_outside + 1 >= series.size()) return std::nullopt;
    return series[*last_outside + 1].t;
}

std::optional<double> envelope_entry_time(double u0_norm, double radius, double mu, double b) {
    const double floor = mu / b;
    const double r2 = radius * radius;
    if (r2 <= floor) return std::nullopt;
    const double u0_sq = u0_norm * u0_norm;
    if (u0_sq + floor <= r2) return 0.0;
    return std::log(u0_sq / (r2 - floor)) / (2.0 * mu);
}

BoundReport check_dissipation(const ModelParams& params, std::span<const TimedField> snapshots, double b,
                              double slack) {
    BoundReport r = make_report("dissipation_inequality");
    r.samples = snapshots.size();
    double worst_rel = 0.0;
    for (const auto& snap : snapshots) {
        const Field& u = snap.field;
        const double n2 = inner(u, u);
        const double val = inner(rhs(params, u), u);
        const double bound = params.mu * n2 - b * n2 * n2;
        const double margin = bound - val;
        const double scale = std::abs(val) + std::abs(bound) + 1e-300;
        note_margin(r, margin, snap.t);
        worst_rel = std::min(worst_rel, margin / scale);
    }
    if (snapshots.empty()) r.worst_margin = 0.0;
    r.tolerance = slack;
    r.satisfied = worst_rel >= -slack;
    r.status = r.satisfied ? BoundStatus::Satisfied : BoundStatus::Violated;
    r.extras = {{"worst_relative_margin", worst_rel}};
    r.note = "tolerance is relative to |<rhs(u),u>| + |bound|";
    return r;
}

}  // namespace nlsh
