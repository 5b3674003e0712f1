#pragma once

#include "nlsh/field.hpp"

#include <utility>

namespace nlsh {

// Discrete differential operators. Periodic grids use exact Fourier symbols;
// clamped grids use finite differences on fields that vanish on the boundary
// ring.
//
// Clamped discretization: let B be the 5-point Laplacian applied at every node
// (ring included) of a field whose ring is zero, with zero values assumed
// outside the array. On the ring, B f picks up the adjacent interior value,
// which is how the zero normal derivative enters. Then
//   laplacian(f)  = B f restricted to the interior,
//   biharmonic(f) = B^T B f restricted to the interior (a 13-point stencil),
// so <biharmonic(f), f> = |B f|^2 >= 0 and biharmonic is symmetric.

/// Returns the Laplacian of f. Clamped results have a zero ring.
Field laplacian(const Field& f);

/// Returns the bilaplacian of f.
Field biharmonic(const Field& f);

/// Returns (df/dx, df/dy). Spectral with the Nyquist mode dropped on periodic
/// grids; second-order central differences on clamped grids.
std::pair<Field, Field> gradient(const Field& f);

/// B f on a clamped grid, ring entries included (see above). On periodic
/// grids this equals laplacian(f).
Field laplacian_with_ring(const Field& f);

/// Quadrature of the L2 inner product: sum f g hx hy.
double inner(const Field& f, const Field& g);
double l2_norm(const Field& f);

struct H2Seminorms {
    double grad;  ///< |grad f|, computed as sqrt(-<laplacian f, f>)
    double lap;   ///< |lap f|, the norm with <biharmonic f, f> = lap^2
};
H2Seminorms h2_seminorms(const Field& f);

}  // namespace nlsh
