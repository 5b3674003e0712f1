#include "nlsh/stepper.hpp"

#include "nlsh/operators.hpp"
#include "nlsh/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>

namespace nlsh {
namespace {

constexpr double kBlowUpThreshold = 1e6;
constexpr int kContourPoints = 32;

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

struct EtdCoefficients {
    std::vector<double> e;
    std::vector<double> e2;
    std::vector<double> q;
    std::vector<double> f1;
    std::vector<double> f2;
    std::vector<double> f3;
};

// Kassam-Trefethen: average each phi-type expression over a circle of radius
// one centred on h*lambda so that no cancellation occurs near zero.
EtdCoefficients etd_coefficients(const std::vector<double>& lambda, double h) {
    const std::size_t n = lambda.size();
    EtdCoefficients c;
    for (auto* v : {&c.e, &c.e2, &c.q, &c.f1, &c.f2, &c.f3}) v->resize(n);
    std::vector<Complex> roots(kContourPoints);
    for (int j = 0; j < kContourPoints; ++j) {
        roots[j] = std::polar(1.0, std::numbers::pi * (j + 0.5) / kContourPoints);
    }
    for (std::size_t k = 0; k < n; ++k) {
        const double hl = h * lambda[k];
        c.e[k] = std::exp(hl);
        c.e2[k] = std::exp(0.5 * hl);
        Complex q{}, f1{}, f2{}, f3{};
        for (const Complex& r : roots) {
            const Complex z = hl + r;
            const Complex ez = std::exp(z);
            const Complex z3 = z * z * z;
            q += (std::exp(0.5 * z) - 1.0) / z;
            f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
            f2 += (2.0 + z + ez * (-2.0 + z)) / z3;
            f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
        }
        const double scale = h / kContourPoints;
        c.q[k] = scale * q.real();
        c.f1[k] = scale * f1.real();
        c.f2[k] = scale * f2.real();
        c.f3[k] = scale * f3.real();
    }
    return c;
}

std::vector<Complex> forward(const Field& f) {
    std::vector<Complex> s(static_cast<std::size_t>(f.grid().nx()) * (f.grid().ny() / 2 + 1));
    fft::forward(f.grid().nx(), f.grid().ny(), f.values(), s);
    return s;
}

void inverse(const std::vector<Complex>& s, Field& f) {
    fft::inverse(f.grid().nx(), f.grid().ny(), s, f.values());
}

// Interior unknown numbering for clamped grids.
struct InteriorMap {
    int nx;
    int ny;
    int n() const { return (nx - 2) * (ny - 2); }
    int operator()(int i, int j) const { return (i - 1) * (ny - 2) + (j - 1); }
};

Vec restrict_interior(const Field& f, const InteriorMap& map) {
    Vec v(map.n());
    for (int i = 1; i < map.nx - 1; ++i) {
        for (int j = 1; j < map.ny - 1; ++j) v[map(i, j)] = f(i, j);
    }
    return v;
}

void extend_interior(const Vec& v, const InteriorMap& map, Field& f) {
    f.fill(0.0);
    for (int i = 1; i < map.nx - 1; ++i) {
        for (int j = 1; j < map.ny - 1; ++j) f(i, j) = v[map(i, j)];
    }
}

// Interior matrix of mu - (1 + lap)^2 with the clamped discretization of
// operators.hpp: Lin = -alpha I - 2 P S P^T - P S S P^T, where S is the
// 5-point stencil on the full node set and P selects the interior.
SpMat clamped_linear_matrix(const Grid& g, double alpha) {
    const int nx = g.nx();
    const int ny = g.ny();
    const int full = nx * ny;
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    std::vector<Eigen::Triplet<double>> st;
    st.reserve(static_cast<std::size_t>(full) * 5);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int r = i * ny + j;
            st.emplace_back(r, r, -2.0 * (ihx2 + ihy2));
            if (i > 0) st.emplace_back(r, r - ny, ihx2);
            if (i < nx - 1) st.emplace_back(r, r + ny, ihx2);
            if (j > 0) st.emplace_back(r, r - 1, ihy2);
            if (j < ny - 1) st.emplace_back(r, r + 1, ihy2);
        }
    }
    SpMat s(full, full);
    s.setFromTriplets(st.begin(), st.end());

    const InteriorMap map{nx, ny};
    std::vector<Eigen::Triplet<double>> pt;
    for (int i = 1; i < nx - 1; ++i) {
        for (int j = 1; j < ny - 1; ++j) pt.emplace_back(map(i, j), i * ny + j, 1.0);
    }
    SpMat p(map.n(), full);
    p.setFromTriplets(pt.begin(), pt.end());

    const SpMat sp = s * SpMat(p.transpose());
    const SpMat lap = p * sp;
    const SpMat bih = SpMat(sp.transpose()) * sp;
    SpMat id(map.n(), map.n());
    id.setIdentity();
    SpMat lin = -alpha * id - 2.0 * lap - bih;
    lin.makeCompressed();
    return lin;
}

void check_blow_up(const Field& u, double t) {
    double m = 0.0;
    for (double v : u.values()) {
        if (!std::isfinite(v)) throw BlowUpError(t, std::numeric_limits<double>::infinity());
        m = std::max(m, std::abs(v));
    }
    if (m > kBlowUpThreshold) throw BlowUpError(t, m);
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
    case Scheme::ETDRK4: return "ETDRK4";
    case Scheme::IMEX_BE: return "IMEX_BE";
    case Scheme::IMEX_CN: return "IMEX_CN";
    }
    return "?";
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "ETDRK4" || name == "etdrk4") return Scheme::ETDRK4;
    if (name == "IMEX_BE" || name == "imex_be") return Scheme::IMEX_BE;
    if (name == "IMEX_CN" || name == "imex_cn") return Scheme::IMEX_CN;
    throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

struct Stepper::Impl {
    // Periodic
    std::vector<double> lambda;
    EtdCoefficients etd;
    // Clamped
    InteriorMap map{0, 0};
    SpMat lin;
    Eigen::SimplicialLDLT<SpMat> solver;
};

Stepper::Stepper(ModelParams params, const Grid& grid, const StepperConfig& cfg)
    : params_(std::move(params)), grid_(grid), cfg_(cfg), impl_(std::make_unique<Impl>()) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidArgument("stepper: dt must be positive");
    if (params_.variant == ModelVariant::Nonlocal && params_.nonlinearity) {
        if (!params_.nonlocal) throw InvalidArgument("stepper: nonlocal model without kernel cache");
        if (!(params_.nonlocal->grid() == grid)) throw InvalidArgument("stepper: kernel cache grid mismatch");
    }
    if (grid.bc() == Boundary::Periodic) {
        const auto k2 = wavenumber_squared(grid);
        impl_->lambda.resize(k2.size());
        for (std::size_t k = 0; k < k2.size(); ++k) {
            const double s = 1.0 - k2[k];
            impl_->lambda[k] = params_.mu - s * s;
        }
        if (cfg.scheme == Scheme::ETDRK4) impl_->etd = etd_coefficients(impl_->lambda, cfg.dt);
        return;
    }
    if (cfg.scheme == Scheme::ETDRK4) {
        throw InvalidArgument("stepper: ETDRK4 requires a periodic grid (clamped grids use IMEX_BE or IMEX_CN)");
    }
    impl_->map = InteriorMap{grid.nx(), grid.ny()};
    impl_->lin = clamped_linear_matrix(grid, params_.alpha());
    const double c = cfg.scheme == Scheme::IMEX_BE ? 1.0 : 0.5;
    SpMat id(impl_->lin.rows(), impl_->lin.cols());
    id.setIdentity();
    const SpMat m = id - (c * cfg.dt) * impl_->lin;
    impl_->solver.compute(m);
    if (impl_->solver.info() != Eigen::Success) throw Error("stepper: factorization of (I - c dt Lin) failed");
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

Field Stepper::apply_linear(const Field& f) const {
    if (grid_.bc() == Boundary::Periodic) {
        auto s = forward(f);
        for (std::size_t k = 0; k < s.size(); ++k) s[k] *= impl_->lambda[k];
        Field out(grid_);
        inverse(s, out);
        return out;
    }
    Field out(grid_);
    extend_interior(impl_->lin * restrict_interior(f, impl_->map), impl_->map, out);
    return out;
}

void Stepper::advance(std::span<Field> state, const ExplicitFn& explicit_part) const {
    const std::size_t nf = state.size();
    const double dt = cfg_.dt;
    std::vector<Field> tend(nf, Field(grid_));
    auto eval = [&](std::span<const Field> y) {
        for (auto& t : tend) t.fill(0.0);
        explicit_part(y, tend);
    };

    if (grid_.bc() == Boundary::Periodic) {
        const auto& lam = impl_->lambda;
        const std::size_t ns = lam.size();
        if (cfg_.scheme == Scheme::ETDRK4) {
            const auto& c = impl_->etd;
            std::vector<std::vector<Complex>> vh(nf), nv(nf), ah(nf), na(nf), nb(nf);
            std::vector<Field> stage(state.begin(), state.end());

            eval(stage);
            for (std::size_t f = 0; f < nf; ++f) {
                vh[f] = forward(state[f]);
                nv[f] = forward(tend[f]);
                ah[f].resize(ns);
                for (std::size_t k = 0; k < ns; ++k) ah[f][k] = c.e2[k] * vh[f][k] + c.q[k] * nv[f][k];
                inverse(ah[f], stage[f]);
            }
            eval(stage);
            std::vector<Complex> tmp(ns);
            for (std::size_t f = 0; f < nf; ++f) {
                na[f] = forward(tend[f]);
                for (std::size_t k = 0; k < ns; ++k) tmp[k] = c.e2[k] * vh[f][k] + c.q[k] * na[f][k];
                inverse(tmp, stage[f]);
            }
            eval(stage);
            for (std::size_t f = 0; f < nf; ++f) {
                nb[f] = forward(tend[f]);
                for (std::size_t k = 0; k < ns; ++k) {
                    tmp[k] = c.e2[k] * ah[f][k] + c.q[k] * (2.0 * nb[f][k] - nv[f][k]);
                }
                inverse(tmp, stage[f]);
            }
            eval(stage);
            for (std::size_t f = 0; f < nf; ++f) {
                const auto nc = forward(tend[f]);
                for (std::size_t k = 0; k < ns; ++k) {
                    tmp[k] = c.e[k] * vh[f][k] + c.f1[k] * nv[f][k] +
                             2.0 * c.f2[k] * (na[f][k] + nb[f][k]) + c.f3[k] * nc[k];
                }
                inverse(tmp, state[f]);
            }
            return;
        }

        if (cfg_.scheme == Scheme::IMEX_BE) {
            eval(std::span<const Field>(state.data(), nf));
            for (std::size_t f = 0; f < nf; ++f) {
                auto y = forward(state[f]);
                const auto n = forward(tend[f]);
                for (std::size_t k = 0; k < ns; ++k) y[k] = (y[k] + dt * n[k]) / (1.0 - dt * lam[k]);
                inverse(y, state[f]);
            }
            return;
        }

        // IMEX_CN predictor-corrector.
        std::vector<std::vector<Complex>> r(nf), n0(nf);
        std::vector<Field> pred(state.begin(), state.end());
        eval(std::span<const Field>(state.data(), nf));
        for (std::size_t f = 0; f < nf; ++f) {
            r[f] = forward(state[f]);
            n0[f] = forward(tend[f]);
            std::vector<Complex> y(ns);
            for (std::size_t k = 0; k < ns; ++k) {
                r[f][k] *= 1.0 + 0.5 * dt * lam[k];
                y[k] = (r[f][k] + dt * n0[f][k]) / (1.0 - 0.5 * dt * lam[k]);
            }
            inverse(y, pred[f]);
        }
        eval(pred);
        for (std::size_t f = 0; f < nf; ++f) {
            const auto n1 = forward(tend[f]);
            std::vector<Complex> y(ns);
            for (std::size_t k = 0; k < ns; ++k) {
                y[k] = (r[f][k] + 0.5 * dt * (n0[f][k] + n1[k])) / (1.0 - 0.5 * dt * lam[k]);
            }
            inverse(y, state[f]);
        }
        return;
    }

    // Clamped: interior unknowns, factorized (I - c dt Lin).
    const auto& map = impl_->map;
    if (cfg_.scheme == Scheme::IMEX_BE) {
        eval(std::span<const Field>(state.data(), nf));
        for (std::size_t f = 0; f < nf; ++f) {
            const Vec rhs = restrict_interior(state[f], map) + dt * restrict_interior(tend[f], map);
            extend_interior(impl_->solver.solve(rhs), map, state[f]);
        }
        return;
    }
    std::vector<Vec> r(nf), n0(nf);
    std::vector<Field> pred(state.begin(), state.end());
    eval(std::span<const Field>(state.data(), nf));
    for (std::size_t f = 0; f < nf; ++f) {
        const Vec y = restrict_interior(state[f], map);
        r[f] = y + (0.5 * dt) * (impl_->lin * y);
        n0[f] = restrict_interior(tend[f], map);
        extend_interior(impl_->solver.solve(r[f] + dt * n0[f]), map, pred[f]);
    }
    eval(pred);
    for (std::size_t f = 0; f < nf; ++f) {
        const Vec rhs = r[f] + (0.5 * dt) * (n0[f] + restrict_interior(tend[f], map));
        extend_interior(impl_->solver.solve(rhs), map, state[f]);
    }
}

Field Stepper::step(const Field& u, double t) const {
    if (!(u.grid() == grid_)) throw InvalidArgument("stepper: field grid mismatch");
    std::vector<Field> state{u};
    if (!params_.nonlinearity) {
        advance(state, [](std::span<const Field>, std::span<Field>) {});
    } else {
        advance(state, [this](std::span<const Field> y, std::span<Field> out) {
            out[0] = nonlinear_term(params_, y[0]);
            out[0] *= -1.0;
        });
    }
    check_blow_up(state[0], t + cfg_.dt);
    return std::move(state[0]);
}

void Stepper::step_with_tangents(Field& u, std::span<Field> tangents, double t) const {
    std::vector<Field> state;
    state.reserve(tangents.size() + 1);
    state.push_back(u);
    state.insert(state.end(), tangents.begin(), tangents.end());
    if (params_.nonlinearity) {
        advance(state, [this](std::span<const Field> y, std::span<Field> out) {
            const Field w = potential(params_, y[0]);
            out[0] = hadamard(y[0], w);
            out[0] *= -1.0;
            for (std::size_t k = 1; k < y.size(); ++k) out[k] = tangent_nonlinear(params_, y[0], w, y[k]);
        });
    } else {
        advance(state, [](std::span<const Field>, std::span<Field>) {});
    }
    check_blow_up(state[0], t + cfg_.dt);
    u = std::move(state[0]);
    for (std::size_t k = 0; k < tangents.size(); ++k) tangents[k] = std::move(state[k + 1]);
}

SeriesSample sample_norms(const Field& u, double t) {
    const auto h2 = h2_seminorms(u);
    return {t, l2_norm(u), h2.grad, h2.lap};
}

Trajectory integrate(const ModelParams& params, const StepperConfig& cfg, const Field& u0,
                     const IntegrateOptions& options) {
    if (cfg.series_stride < 1 || cfg.snapshot_stride < 1) {
        throw InvalidArgument("integrate: strides must be positive");
    }
    if (!(cfg.t_end >= 0.0)) throw InvalidArgument("integrate: t_end must be nonnegative");
    require_finite(u0, "initial condition");
    const Stepper stepper(params, u0.grid(), cfg);
    const long steps = std::lround(cfg.t_end / cfg.dt);

    auto traj = std::make_shared<Trajectory>(Trajectory{{}, {}, u0, 0.0});
    auto record = [&](const Field& u, double t, long n) {
        const bool last = n == steps;
        if (n % cfg.series_stride == 0 || last) {
            traj->series.push_back(sample_norms(u, t));
            if (options.on_sample) options.on_sample(traj->series.back());
        }
        if (n % cfg.snapshot_stride == 0 || last) {
            if (options.keep_snapshots) traj->snapshots.push_back({t, u});
            if (options.on_snapshot) options.on_snapshot(u, t);
        }
    };

    Field u = u0;
    record(u, 0.0, 0);
    for (long n = 1; n <= steps; ++n) {
        const double t = (n - 1) * cfg.dt;
        try {
            u = stepper.step(u, t);
        } catch (const BlowUpError& e) {
            traj->final_state = u;
            traj->final_time = t;
            throw IntegrationAborted(e, traj);
        } catch (const NonFiniteError&) {
            traj->final_state = u;
            traj->final_time = t;
            throw IntegrationAborted(BlowUpError(t, u.max_abs()), traj);
        }
        record(u, n * cfg.dt, n);
    }
    traj->final_state = std::move(u);
    traj->final_time = steps * cfg.dt;
    return std::move(*traj);
}

}  // namespace nlsh
