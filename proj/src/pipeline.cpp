#include "nlsh/pipeline.hpp"

#include "nlsh/error.hpp"
#include "nlsh/initial.hpp"
#include "nlsh/snapshot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nlsh {
namespace {

BoundReport not_applicable(std::string name, std::string note) {
    BoundReport r;
    r.bound_name = std::move(name);
    r.status = BoundStatus::NotApplicable;
    r.satisfied = true;
    r.note = std::move(note);
    return r;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

double effective_b(const RunConfig& config) {
    if (config.model.variant == ModelVariant::Nonlocal) return config.make_kernel().bounds().b;
    const Grid g = config.make_grid();
    return 1.0 / (g.cell_area() * static_cast<double>(g.size()));
}

bool BoundsOutcome::any_violated() const {
    return std::any_of(reports.begin(), reports.end(),
                       [](const BoundReport& r) { return r.status == BoundStatus::Violated; });
}

BoundsOutcome evaluate_bounds(const RunConfig& config, std::span<const SeriesSample> series,
                              std::span<const TimedField> snapshots) {
    BoundsOutcome out;
    const double mu = config.model.mu;
    const double b = effective_b(config);
    const double slack = config.slack();
    if (!config.model.nonlinearity) {
        out.reports.push_back(not_applicable("lemma1_envelope", "nonlinearity disabled"));
        return out;
    }
    if (config.analysis.lemma1) {
        if (mu > 0.0) {
            out.reports.push_back(check_lemma1(series, mu, b, slack));
            out.reports.push_back(check_absorbing_radius(series, mu, b));
        } else {
            out.reports.push_back(check_decay(series, mu));
        }
        if (!snapshots.empty()) out.reports.push_back(check_dissipation(config.make_params(), snapshots, b, slack));
    }
    if (config.analysis.h2) out.reports.push_back(check_h2_bound(series, mu, b, slack));
    return out;
}

std::string bounds_key_value(const BoundsOutcome& outcome) {
    std::string out;
    for (const auto& r : outcome.reports) out += to_key_value(r) + "\n";
    return out;
}

nlohmann::json bounds_json(const BoundsOutcome& outcome) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : outcome.reports) j.push_back(to_json(r));
    return j;
}

std::string series_csv(std::span<const SeriesSample> series) {
    std::string out = "t,l2,grad_l2,lap_l2\n";
    for (const auto& s : series) out += num(s.t) + "," + num(s.l2) + "," + num(s.grad_l2) + "," + num(s.lap_l2) + "\n";
    return out;
}

std::vector<SeriesSample> parse_series_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,l2,grad_l2,lap_l2", 0) != 0) {
        throw InvalidArgument("series csv: missing header t,l2,grad_l2,lap_l2");
    }
    std::vector<SeriesSample> series;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        SeriesSample s;
        char c1 = 0, c2 = 0, c3 = 0;
        if (!(row >> s.t >> c1 >> s.l2 >> c2 >> s.grad_l2 >> c3 >> s.lap_l2) || c1 != ',' || c2 != ',' || c3 != ',') {
            throw InvalidArgument("series csv: malformed row " + std::to_string(lineno));
        }
        series.push_back(s);
    }
    if (series.empty()) throw InvalidArgument("series csv: no samples");
    return series;
}

SimulateResult run_simulate(const RunConfig& config, RunDirectory* dir) {
    const Grid grid = config.make_grid();
    const ModelParams params = config.make_params();
    const Field u0 = make_initial(grid, config.ic);

    IntegrateOptions options;
    int snap_index = 0;
    if (dir && config.output.sh2d) {
        options.on_snapshot = [&](const Field& f, double t) {
            dir->write_snapshot(fmt::format("snapshots/{:06d}.sh2d", snap_index++), f, t);
        };
    }

    SimulateResult result{{}, u0, 0.0, {}, std::nullopt};
    std::vector<TimedField> snapshots;
    try {
        Trajectory traj = integrate(params, config.stepper, u0, options);
        result.series = std::move(traj.series);
        snapshots = std::move(traj.snapshots);
        result.final_state = std::move(traj.final_state);
        result.final_time = traj.final_time;
    } catch (const IntegrationAborted& e) {
        result.aborted = e.what();
        result.series = e.partial().series;
        snapshots = e.partial().snapshots;
        result.final_state = e.partial().final_state;
        result.final_time = e.partial().final_time;
    }
    if (!result.series.empty()) result.bounds = evaluate_bounds(config, result.series, snapshots);

    if (dir) {
        if (config.output.csv) dir->write("series.csv", series_csv(result.series));
        if (config.output.sh2d) dir->write_snapshot("final.sh2d", result.final_state, result.final_time);
        std::string kv = bounds_key_value(result.bounds);
        if (result.aborted) kv += "aborted=1 reason=\"" + *result.aborted + "\"\n";
        dir->write("bounds.txt", kv);
        if (config.output.json) {
            nlohmann::json j;
            j["bounds"] = bounds_json(result.bounds);
            j["aborted"] = result.aborted ? nlohmann::json(*result.aborted) : nlohmann::json();
            j["final_time"] = result.final_time;
            dir->write("bounds.json", j.dump(2) + "\n");
        }
        if (config.analysis.theory && config.model.mu > 0.0 && config.model.variant == ModelVariant::Nonlocal) {
            const auto kb = config.make_kernel().bounds();
            const theory::Inputs in{config.model.mu, kb.a, kb.b, config.analysis.theory_C};
            dir->write("theory.json", to_json(in, theory_row(in)).dump(2) + "\n");
        }
    }
    return result;
}

LyapunovResult run_lyapunov(const RunConfig& config, RunDirectory* dir) {
    if (!(config.model.mu > 0.0) && config.analysis.lyapunov) {
        throw InvalidArgument("run_lyapunov: analysis.lyapunov requires mu > 0");
    }
    const Grid grid = config.make_grid();
    const ModelParams params = config.make_params();
    Field u = make_initial(grid, config.ic);

    StepperConfig transient = config.stepper;
    transient.t_end = config.analysis.lyapunov_transient;
    double t = 0.0;
    if (transient.t_end > 0.0) {
        IntegrateOptions quiet;
        quiet.keep_snapshots = false;
        Trajectory traj = integrate(params, transient, u, quiet);
        u = std::move(traj.final_state);
        t = traj.final_time;
    }

    const Stepper stepper(params, grid, config.stepper);
    TangentBundle bundle =
        initial_bundle(grid, config.analysis.lyapunov_m, config.model.mu, config.analysis.reorth_period);
    const long steps = std::lround(config.analysis.lyapunov_time / config.stepper.dt);
    if (steps < 1) throw InvalidArgument("run_lyapunov: analysis.lyapunov_time shorter than one step");

    std::string csv = "t";
    for (int k = 1; k <= bundle.m(); ++k) csv += ",lambda_" + std::to_string(k);
    csv += ",trace\n";
    EvolveOptions options;
    options.on_reorth = [&](double time, std::span<const double> exps, double trace) {
        csv += num(time);
        for (double e : exps) csv += "," + num(e);
        csv += "," + num(trace) + "\n";
    };
    const EvolveResult evolved = evolve_tangent(stepper, u, bundle, steps, t, options);

    std::optional<double> threshold;
    if (config.model.mu > 0.0) {
        if (config.model.variant == ModelVariant::Nonlocal) {
            const auto kb = config.make_kernel().bounds();
            threshold = theory::bound_nonlocal({config.model.mu, kb.a, kb.b, config.analysis.theory_C}).m_est;
        } else {
            threshold = theory::bound_local(config.model.mu, config.analysis.theory_C);
        }
    }
    LyapunovResult result{exponents_and_ky(bundle, bundle.elapsed, evolved.trace, threshold), evolved.restarts};

    if (dir) {
        if (config.output.csv) dir->write("lyapunov.csv", csv);
        nlohmann::json j = to_json(result.report);
        j["restarts"] = result.restarts;
        j["reorth_period_final"] = bundle.reorth_period;
        if (config.output.json) dir->write("lyapunov.json", j.dump(2) + "\n");
        std::string kv = "m=" + std::to_string(bundle.m()) + " ky_dimension=" + num(result.report.ky_dimension) +
                         " m_insufficient=" + (result.report.m_insufficient ? "1" : "0") +
                         " exponent_sum=" + num(result.report.exponent_sum) +
                         " mean_negative_trace=" + num(result.report.mean_negative_trace);
        if (threshold) kv += " analytic_threshold=" + num(*threshold);
        kv += " lambda_max=" + num(result.report.exponents.front()) + "\n";
        dir->write("lyapunov.txt", kv);
        if (config.output.sh2d) dir->write_snapshot("final.sh2d", u, t + bundle.elapsed);
    }
    return result;
}

TheoryRow theory_row(const theory::Inputs& in) {
    theory::validate(in);
    const auto nl = theory::bound_nonlocal(in);
    const double local = theory::bound_local(in.mu, in.C);
    return {theory::absorbing_radius(in.mu, in.b), nl.eps_opt, nl.m_est, local, nl.m_est - local};
}

std::string theory_table(const theory::Inputs& in, const TheoryRow& row) {
    std::string out = fmt::format("{:>8} {:>8} {:>8} {:>8} | {:>10} {:>10} {:>14} {:>12} {:>10}\n", "mu", "a", "b", "C",
                                  "R", "eps_opt", "bound_nonlocal", "bound_local", "gap");
    out += fmt::format("{:>8.4g} {:>8.4g} {:>8.4g} {:>8.4g} | {:>10.6f} {:>10.6f} {:>14.6f} {:>12.6f} {:>10.6f}\n",
                       in.mu, in.a, in.b, in.C, row.radius, row.eps_opt, row.bound_nonlocal, row.bound_local, row.gap);
    return out;
}

nlohmann::json to_json(const theory::Inputs& in, const TheoryRow& row) {
    return {{"mu", in.mu},
            {"a", in.a},
            {"b", in.b},
            {"C", in.C},
            {"R", row.radius},
            {"eps_opt", row.eps_opt},
            {"bound_nonlocal", row.bound_nonlocal},
            {"bound_local", row.bound_local},
            {"gap", row.gap},
            {"note", "dimension bounds carry the unspecified domain constant C"}};
}

}  // namespace nlsh
