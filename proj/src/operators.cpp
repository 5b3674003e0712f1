#include "nlsh/operators.hpp"

#include "nlsh/error.hpp"
#include "nlsh/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace nlsh {
namespace {

void check_clamped_ring(const Field& f, const char* what) {
    const Grid& g = f.grid();
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            if (g.on_ring(i, j) && f(i, j) != 0.0) {
                throw InvalidArgument(std::string(what) +
                                      ": clamped field is nonzero on the boundary ring at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
            if (!g.on_ring(i, j)) j = g.ny() - 2;
        }
    }
}

void validate(const Field& f, const char* what) {
    require_finite(f, what);
    if (f.grid().bc() == Boundary::Clamped) check_clamped_ring(f, what);
}

Field apply_symbol(const Field& f, int power) {
    SpectralField s = to_spectral(f);
    const auto k2 = wavenumber_squared(f.grid());
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double sym = power == 1 ? -k2[k] : k2[k] * k2[k];
        s[k] *= sym;
    }
    return to_physical(s);
}

// 5-point stencil at every node with zero values outside the array.
Field stencil5_everywhere(const Field& f) {
    const Grid& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    const double ihx2 = 1.0 / (g.hx() * g.hx());
    const double ihy2 = 1.0 / (g.hy() * g.hy());
    Field out(g);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const double c = f(i, j);
            const double w = i > 0 ? f(i - 1, j) : 0.0;
            const double e = i < nx - 1 ? f(i + 1, j) : 0.0;
            const double s = j > 0 ? f(i, j - 1) : 0.0;
            const double n = j < ny - 1 ? f(i, j + 1) : 0.0;
            out(i, j) = (w - 2.0 * c + e) * ihx2 + (s - 2.0 * c + n) * ihy2;
        }
    }
    return out;
}

}  // namespace

Field laplacian(const Field& f) {
    validate(f, "laplacian");
    if (f.grid().bc() == Boundary::Periodic) return apply_symbol(f, 1);
    Field out = stencil5_everywhere(f);
    out.zero_ring();
    return out;
}

Field laplacian_with_ring(const Field& f) {
    validate(f, "laplacian");
    if (f.grid().bc() == Boundary::Periodic) return apply_symbol(f, 1);
    return stencil5_everywhere(f);
}

Field biharmonic(const Field& f) {
    validate(f, "biharmonic");
    if (f.grid().bc() == Boundary::Periodic) return apply_symbol(f, 2);
    // The stencil is symmetric, so applying it again realizes B^T.
    Field out = stencil5_everywhere(stencil5_everywhere(f));
    out.zero_ring();
    return out;
}

std::pair<Field, Field> gradient(const Field& f) {
    validate(f, "gradient");
    const Grid& g = f.grid();
    if (g.bc() == Boundary::Periodic) {
        const SpectralField s = to_spectral(f);
        SpectralField sx(g);
        SpectralField sy(g);
        const Complex I(0.0, 1.0);
        for (int i = 0; i < s.nkx(); ++i) {
            const bool nyq_x = i == g.nx() / 2;
            for (int j = 0; j < s.nky(); ++j) {
                const bool nyq_y = j == g.ny() / 2;
                sx(i, j) = nyq_x ? Complex{} : I * wavenumber_x(g, i) * s(i, j);
                sy(i, j) = nyq_y ? Complex{} : I * wavenumber_y(g, j) * s(i, j);
            }
        }
        return {to_physical(sx), to_physical(sy)};
    }
    Field fx(g);
    Field fy(g);
    const double ihx = 0.5 / g.hx();
    const double ihy = 0.5 / g.hy();
    for (int i = 1; i < g.nx() - 1; ++i) {
        for (int j = 1; j < g.ny() - 1; ++j) {
            fx(i, j) = (f(i + 1, j) - f(i - 1, j)) * ihx;
            fy(i, j) = (f(i, j + 1) - f(i, j - 1)) * ihy;
        }
    }
    return {std::move(fx), std::move(fy)};
}

double inner(const Field& f, const Field& g) {
    require_same_grid(f, g, "inner");
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g[k];
    return s * f.grid().cell_area();
}

double l2_norm(const Field& f) {
    require_finite(f, "l2_norm");
    return std::sqrt(inner(f, f));
}

H2Seminorms h2_seminorms(const Field& f) {
    const double grad_sq = -inner(laplacian(f), f);
    const Field b = laplacian_with_ring(f);
    return {std::sqrt(std::max(grad_sq, 0.0)), std::sqrt(inner(b, b))};
}

}  // namespace nlsh
