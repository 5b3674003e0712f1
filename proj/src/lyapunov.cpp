#include "nlsh/lyapunov.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"
#include "nlsh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

namespace nlsh {
namespace {

struct ModeSpec {
    double growth;
    double k2;
    int p;
    int q;
    int kind;  // periodic: 0 cos, 1 sin; clamped: 0
};

bool more_unstable(const ModeSpec& x, const ModeSpec& y) {
    return std::tie(y.growth, x.k2, x.p, x.q, x.kind) < std::tie(x.growth, y.k2, y.p, y.q, y.kind);
}

std::vector<ModeSpec> periodic_modes(const Grid& g, double mu) {
    std::vector<ModeSpec> modes;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int p = -g.nx() / 2 + 1; p < g.nx() / 2; ++p) {
        for (int q = 0; q < g.ny() / 2; ++q) {
            if (q == 0 && p < 0) continue;
            const double kx = two_pi * p / g.lx();
            const double ky = two_pi * q / g.ly();
            const double k2 = kx * kx + ky * ky;
            const double s = 1.0 - k2;
            const double growth = mu - s * s;
            modes.push_back({growth, k2, p, q, 0});
            if (p != 0 || q != 0) modes.push_back({growth, k2, p, q, 1});
        }
    }
    std::sort(modes.begin(), modes.end(), more_unstable);
    return modes;
}

std::vector<ModeSpec> clamped_modes(const Grid& g, double mu) {
    std::vector<ModeSpec> modes;
    const double hx = g.hx();
    const double hy = g.hy();
    const double pi = std::numbers::pi;
    for (int p = 1; p <= g.nx() - 2; ++p) {
        const double sx = std::sin(p * pi * hx / (2.0 * g.lx()));
        const double lx = 4.0 / (hx * hx) * sx * sx;
        for (int q = 1; q <= g.ny() - 2; ++q) {
            const double sy = std::sin(q * pi * hy / (2.0 * g.ly()));
            const double lam = lx + 4.0 / (hy * hy) * sy * sy;
            const double s = 1.0 - lam;
            modes.push_back({mu - s * s, lam, p, q, 0});
        }
    }
    std::sort(modes.begin(), modes.end(), more_unstable);
    return modes;
}

Field mode_field(const Grid& g, const ModeSpec& mode) {
    Field f(g);
    const double pi = std::numbers::pi;
    if (g.bc() == Boundary::Periodic) {
        const double kx = 2.0 * pi * mode.p / g.lx();
        const double ky = 2.0 * pi * mode.q / g.ly();
        for (int i = 0; i < g.nx(); ++i) {
            for (int j = 0; j < g.ny(); ++j) {
                const double phase = kx * g.x(i) + ky * g.y(j);
                f(i, j) = mode.kind == 0 ? std::cos(phase) : std::sin(phase);
            }
        }
        return f;
    }
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            f(i, j) = std::sin(mode.p * pi * g.x(i) / g.lx()) * std::sin(mode.q * pi * g.y(j) / g.ly());
        }
    }
    f.zero_ring();
    return f;
}

}  // namespace

std::vector<double> orthonormalize(std::span<Field> vectors) {
    std::vector<double> logs(vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        const double before = std::sqrt(inner(vectors[j], vectors[j]));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) vectors[j].axpy(-inner(vectors[i], vectors[j]), vectors[i]);
        }
        const double norm = std::sqrt(inner(vectors[j], vectors[j]));
        if (!(norm > 1e-12 * before) || !std::isfinite(norm)) {
            throw Error("orthonormalize: tangent vector " + std::to_string(j) + " degenerated");
        }
        vectors[j] *= 1.0 / norm;
        logs[j] = std::log(norm);
    }
    return logs;
}

double gram_residual(std::span<const Field> vectors) {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i; j < vectors.size(); ++j) {
            const double g = inner(vectors[i], vectors[j]);
            worst = std::max(worst, i == j ? std::abs(std::sqrt(g) - 1.0) : std::abs(g));
        }
    }
    return worst;
}

TangentBundle initial_bundle(const Grid& grid, int m, double mu, int reorth_period) {
    if (m < 1) throw InvalidArgument("initial_bundle: m must be positive");
    if (reorth_period < 1) throw InvalidArgument("initial_bundle: reorth_period must be positive");
    const auto modes = grid.bc() == Boundary::Periodic ? periodic_modes(grid, mu) : clamped_modes(grid, mu);
    if (static_cast<std::size_t>(m) > modes.size()) throw InvalidArgument("initial_bundle: m exceeds mode count");
    TangentBundle bundle;
    bundle.reorth_period = reorth_period;
    for (int k = 0; k < m; ++k) bundle.vectors.push_back(mode_field(grid, modes[k]));
    orthonormalize(bundle.vectors);
    bundle.log_growth.assign(m, 0.0);
    return bundle;
}

std::vector<double> periodic_symbol_spectrum(const Grid& grid, double mu, int m) {
    const auto modes = periodic_modes(grid, mu);
    std::vector<double> out;
    for (int k = 0; k < m && k < static_cast<int>(modes.size()); ++k) out.push_back(modes[k].growth);
    return out;
}

TraceTerms trace_terms(const ModelParams& params, const Field& u, std::span<const Field> basis) {
    const double residual = gram_residual(basis);
    if (residual > 1e-8) {
        throw InvalidArgument("trace_LQm: basis is not orthonormal (Gram residual " + std::to_string(residual) + ")");
    }
    TraceTerms t;
    t.linear = params.alpha() * static_cast<double>(basis.size());
    const bool nonlinear = params.nonlinearity;
    const Field w = nonlinear ? potential(params, u) : Field(u.grid());
    for (const Field& phi : basis) {
        require_same_grid(u, phi, "trace_LQm");
        t.biharmonic += inner(biharmonic(phi), phi);
        t.laplacian += 2.0 * inner(laplacian(phi), phi);
        if (!nonlinear) continue;
        const Field phisq = hadamard(phi, phi);
        if (params.variant == ModelVariant::LocalCubic) {
            t.potential += 3.0 * inner(w, phisq);
        } else {
            t.potential += inner(w, phisq);
            const Field conv = params.nonlocal->weight_signed(hadamard(u, phi));
            t.coupling += 2.0 * inner(hadamard(u, conv), phi);
        }
    }
    return t;
}

double trace_LQm(const ModelParams& params, const Field& u, std::span<const Field> basis) {
    return trace_terms(params, u, basis).total();
}

double trace_lower_bound(const ModelParams& params, double sum_lap_sq, double u_norm_sq, int m, double eps) {
    if (!(eps > 1.0)) throw InvalidArgument("trace_lower_bound: eps must exceed 1");
    double per_mode = 1.0 - params.mu - eps;
    if (params.variant == ModelVariant::Nonlocal && params.nonlinearity) {
        const auto bounds = params.nonlocal->kernel().bounds();
        per_mode += (bounds.b - 2.0 * bounds.a) * u_norm_sq;
    }
    return (1.0 - 1.0 / eps) * sum_lap_sq + per_mode * m;
}

EvolveResult evolve_tangent(const Stepper& stepper, Field& u, TangentBundle& bundle, long steps, double t0,
                            const EvolveOptions& options) {
    if (bundle.m() == 0) throw InvalidArgument("evolve_tangent: empty bundle");
    if (static_cast<int>(bundle.log_growth.size()) != bundle.m()) bundle.log_growth.assign(bundle.m(), 0.0);
    const double dt = stepper.config().dt;
    const auto& params = stepper.params();
    EvolveResult result;
    double t = t0;
    result.trace.push_back({t, trace_LQm(params, u, bundle.vectors)});

    long done = 0;
    while (done < steps) {
        const long window = std::min<long>(bundle.reorth_period, steps - done);
        const Field u_saved = u;
        const std::vector<Field> v_saved = bundle.vectors;
        bool blown = false;
        for (long s = 0; s < window && !blown; ++s) {
            stepper.step_with_tangents(u, bundle.vectors, t + s * dt);
            for (const Field& v : bundle.vectors) {
                const double n = v.max_abs();
                if (!std::isfinite(n) || n > options.blow_up_norm) {
                    blown = true;
                    break;
                }
            }
        }
        if (blown) {
            if (bundle.reorth_period == 1) throw Error("evolve_tangent: tangent blow-up with reorth_period = 1");
            u = u_saved;
            bundle.vectors = v_saved;
            bundle.reorth_period = std::max(1, bundle.reorth_period / 2);
            ++result.restarts;
            continue;
        }
        const auto logs = orthonormalize(bundle.vectors);
        for (int k = 0; k < bundle.m(); ++k) bundle.log_growth[k] += logs[k];
        done += window;
        t += window * dt;
        bundle.elapsed += window * dt;
        const double tr = trace_LQm(params, u, bundle.vectors);
        result.trace.push_back({t, tr});
        if (options.on_reorth) {
            std::vector<double> running(bundle.m());
            for (int k = 0; k < bundle.m(); ++k) running[k] = bundle.log_growth[k] / bundle.elapsed;
            options.on_reorth(t, running, tr);
        }
    }
    return result;
}

double kaplan_yorke(std::span<const double> descending, bool& insufficient) {
    insufficient = false;
    double sum = 0.0;
    std::size_t j = 0;
    while (j < descending.size() && sum + descending[j] >= 0.0) sum += descending[j++];
    if (j == 0) return 0.0;
    if (j == descending.size()) {
        insufficient = true;
        return static_cast<double>(j);
    }
    return static_cast<double>(j) + sum / std::abs(descending[j]);
}

double time_average(std::span<const TraceSample> trace) {
    if (trace.empty()) return 0.0;
    if (trace.size() == 1) return trace.front().trace;
    double acc = 0.0;
    for (std::size_t k = 1; k < trace.size(); ++k) {
        acc += 0.5 * (trace[k].trace + trace[k - 1].trace) * (trace[k].t - trace[k - 1].t);
    }
    return acc / (trace.back().t - trace.front().t);
}

LyapunovReport exponents_and_ky(const TangentBundle& bundle, double T, std::span<const TraceSample> trace,
                                std::optional<double> analytic_threshold) {
    if (!(T > 0.0)) throw InvalidArgument("exponents_and_ky: T must be positive");
    LyapunovReport r;
    r.exponents.reserve(bundle.log_growth.size());
    for (double g : bundle.log_growth) r.exponents.push_back(g / T);
    std::sort(r.exponents.begin(), r.exponents.end(), std::greater<>());
    r.ky_dimension = kaplan_yorke(r.exponents, r.m_insufficient);
    for (double l : r.exponents) r.exponent_sum += l;
    r.trace_series.assign(trace.begin(), trace.end());
    if (!trace.empty()) r.mean_negative_trace = -time_average(trace);
    r.analytic_threshold = analytic_threshold;
    return r;
}

nlohmann::json to_json(const LyapunovReport& r) {
    nlohmann::json j;
    j["exponents"] = r.exponents;
    j["ky_dimension"] = r.ky_dimension;
    j["m_insufficient"] = r.m_insufficient;
    j["exponent_sum"] = r.exponent_sum;
    j["mean_negative_trace"] = r.mean_negative_trace;
    j["analytic_threshold"] = r.analytic_threshold ? nlohmann::json(*r.analytic_threshold) : nlohmann::json();
    j["trace_samples"] = r.trace_series.size();
    j["note"] = "Kaplan-Yorke dimension is a numerical estimate; the analytic threshold is an upper bound "
                "with an uncalibrated domain constant C";
    return j;
}

}  // namespace nlsh
