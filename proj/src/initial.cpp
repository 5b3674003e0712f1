#include "nlsh/initial.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"
#include "nlsh/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nlsh {
namespace {

Field finish(Field f, double norm) {
    const Grid& g = f.grid();
    if (g.bc() == Boundary::Clamped) {
        const double pi = std::numbers::pi;
        for (int i = 0; i < g.nx(); ++i) {
            const double sx = std::sin(pi * g.x(i) / g.lx());
            for (int j = 0; j < g.ny(); ++j) {
                const double sy = std::sin(pi * g.y(j) / g.ly());
                f(i, j) *= sx * sx * sy * sy;
            }
        }
        f.zero_ring();
    }
    const double current = l2_norm(f);
    if (current > 0.0) f *= norm / current;
    return f;
}

}  // namespace

Field smooth_random(const Grid& grid, std::uint64_t seed, double norm, double kc) {
    if (!(kc > 0.0)) throw InvalidArgument("smooth_random: kc must be positive");
    // The spectrum is drawn on a periodic twin of the grid so the generator is
    // identical in both boundary modes.
    const Grid periodic(grid.nx(), grid.ny(), grid.lx(), grid.ly(), Boundary::Periodic);
    SpectralField s(periodic);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < s.nkx(); ++i) {
        const double kx = wavenumber_x(periodic, i);
        for (int j = 0; j < s.nky(); ++j) {
            const double ky = wavenumber_y(periodic, j);
            const double re = normal(rng);
            const double im = normal(rng);
            const double amp = std::exp(-(kx * kx + ky * ky) / (2.0 * kc * kc));
            const bool nyquist = i == grid.nx() / 2 || j == grid.ny() / 2;
            s(i, j) = nyquist ? Complex{} : amp * Complex(re, im);
        }
    }
    s(0, 0) = Complex{};
    const Field p = to_physical(s);
    return finish(Field(grid, std::vector<double>(p.values().begin(), p.values().end())), norm);
}

Field single_mode(const Grid& grid, int mx, int my, double norm) {
    Field f(grid);
    const double kx = 2.0 * std::numbers::pi * mx / grid.lx();
    const double ky = 2.0 * std::numbers::pi * my / grid.ly();
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) f(i, j) = std::cos(kx * grid.x(i) + ky * grid.y(j));
    }
    return finish(std::move(f), norm);
}

Field localized_bump(const Grid& grid, double width, double norm) {
    if (!(width > 0.0)) throw InvalidArgument("localized_bump: width must be positive");
    Field f(grid);
    const double cx = 0.5 * grid.lx();
    const double cy = 0.5 * grid.ly();
    for (int i = 0; i < grid.nx(); ++i) {
        for (int j = 0; j < grid.ny(); ++j) {
            const double dx = grid.x(i) - cx;
            const double dy = grid.y(j) - cy;
            f(i, j) = std::exp(-(dx * dx + dy * dy) / (width * width));
        }
    }
    return finish(std::move(f), norm);
}

Field make_initial(const Grid& grid, const InitialSpec& spec) {
    if (spec.generator == "smooth_random") return smooth_random(grid, spec.seed, spec.norm);
    if (spec.generator == "single_mode") return single_mode(grid, spec.mode_x, spec.mode_y, spec.norm);
    if (spec.generator == "bump") return localized_bump(grid, spec.width, spec.norm);
    if (spec.generator == "zero") return Field(grid);
    throw InvalidArgument("unknown initial condition generator '" + spec.generator + "'");
}

}  // namespace nlsh
