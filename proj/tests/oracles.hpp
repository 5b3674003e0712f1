#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls into the library's numerics; fields are read and written element-wise.

#include "nlsh/field.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

using Radial = std::function<double(double)>;

inline Radial gaussian_floor(double b, double a, double sigma) {
    return [=](double r) { return b + (a - b) * std::exp(-r * r / (sigma * sigma)); };
}

inline Radial cosine_bump(double b, double a, double rho) {
    return [=](double r) { return r < rho ? b + 0.5 * (a - b) * (1.0 + std::cos(M_PI * r / rho)) : b; };
}

inline Radial constant(double g) {
    return [=](double) { return g; };
}

// sum over all source nodes of G(|x - xi|) f(xi) hx hy, with coordinates
// computed from scratch. Circular uses the minimum-image torus distance.
inline nlsh::Field convolution(const Radial& G, const nlsh::Field& f, bool circular) {
    const nlsh::Grid& g = f.grid();
    nlsh::Field out(g);
    const double hx = g.lx() / (g.bc() == nlsh::Boundary::Periodic ? g.nx() : g.nx() - 1);
    const double hy = g.ly() / (g.bc() == nlsh::Boundary::Periodic ? g.ny() : g.ny() - 1);
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            long double acc = 0.0L;
            for (int p = 0; p < g.nx(); ++p) {
                for (int q = 0; q < g.ny(); ++q) {
                    double dx = (i - p) * hx;
                    double dy = (j - q) * hy;
                    if (circular) {
                        // Torus of nx*hx by ny*hy; equals lx by ly on periodic grids.
                        dx -= g.nx() * hx * std::round(dx / (g.nx() * hx));
                        dy -= g.ny() * hy * std::round(dy / (g.ny() * hy));
                    }
                    acc += static_cast<long double>(G(std::sqrt(dx * dx + dy * dy))) * f(p, q);
                }
            }
            out(i, j) = static_cast<double>(acc * hx * hy);
        }
    }
    return out;
}

// sup over [0, r_max] of |G'| and |G'' + G'/r| by centred differences on a
// dense radial grid.
struct SampledBounds {
    double k1 = 0.0;
    double k2 = 0.0;
};

inline SampledBounds sampled_bounds(const Radial& G, double r_max, int n = 200000) {
    SampledBounds s;
    const double h = r_max / n;
    const double e = 1e-4 * h + 1e-6;
    for (int k = 1; k < n; ++k) {
        const double r = k * h;
        const double d1 = (G(r + e) - G(r - e)) / (2 * e);
        const double d2 = (G(r + e) - 2 * G(r) + G(r - e)) / (e * e);
        s.k1 = std::max(s.k1, std::abs(d1));
        s.k2 = std::max(s.k2, std::abs(d2 + d1 / r));
    }
    return s;
}

// Golden-section search for the minimizer of a unimodal function on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - phi * (hi - lo);
    double d = lo + phi * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + phi * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

// Root of an increasing-then-decreasing scalar function by bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    double flo = f(lo);
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double quad_inner(const nlsh::Field& f, const nlsh::Field& g) {
    const nlsh::Grid& gr = f.grid();
    const double hx = gr.lx() / (gr.bc() == nlsh::Boundary::Periodic ? gr.nx() : gr.nx() - 1);
    const double hy = gr.ly() / (gr.bc() == nlsh::Boundary::Periodic ? gr.ny() : gr.ny() - 1);
    long double acc = 0.0L;
    for (std::size_t k = 0; k < f.size(); ++k) acc += static_cast<long double>(f[k]) * g[k];
    return static_cast<double>(acc * hx * hy);
}

// Uniform random field in [-1, 1]; zero ring on clamped grids.
inline nlsh::Field random_field(const nlsh::Grid& g, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    nlsh::Field f(g);
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const bool ring = g.bc() == nlsh::Boundary::Clamped && g.on_ring(i, j);
            f(i, j) = ring ? 0.0 : scale * uni(rng);
        }
    }
    return f;
}

// Smooth random trigonometric field (a few low modes), periodic grids.
inline nlsh::Field smooth_field(const nlsh::Grid& g, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    nlsh::Field f(g);
    for (int p = -3; p <= 3; ++p) {
        for (int q = -3; q <= 3; ++q) {
            const double c = n01(rng), s = n01(rng);
            for (int i = 0; i < g.nx(); ++i) {
                for (int j = 0; j < g.ny(); ++j) {
                    const double ph = 2 * M_PI * (p * i / double(g.nx()) + q * j / double(g.ny()));
                    f(i, j) += scale * (c * std::cos(ph) + s * std::sin(ph)) / 7.0;
                }
            }
        }
    }
    if (g.bc() == nlsh::Boundary::Clamped) {
        for (int i = 0; i < g.nx(); ++i) {
            for (int j = 0; j < g.ny(); ++j) {
                const double wx = std::sin(M_PI * i / (g.nx() - 1)), wy = std::sin(M_PI * j / (g.ny() - 1));
                f(i, j) *= wx * wx * wy * wy;
            }
        }
        f.zero_ring();
    }
    return f;
}

}  // namespace oracle
