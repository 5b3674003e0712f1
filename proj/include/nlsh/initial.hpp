#pragma once

#include "nlsh/field.hpp"

#include <cstdint>
#include <string>

namespace nlsh {

// Named initial-condition generators. Every generator returns a field whose
// L2 norm equals `norm` (zero stays zero). On clamped grids the profile is
// multiplied by sin^2(pi x/lx) sin^2(pi y/ly), which vanishes together with its
// normal derivative on the walls, and the boundary ring is zeroed.

/// Seeded Gaussian random Fourier coefficients with amplitude falloff
/// exp(-|k|^2 / (2 kc^2)).
Field smooth_random(const Grid& grid, std::uint64_t seed, double norm, double kc = 1.5);

/// cos(kx x + ky y) with kx = 2 pi mx / lx, ky = 2 pi my / ly.
Field single_mode(const Grid& grid, int mx, int my, double norm);

/// Gaussian bump of the given width centred in the domain.
Field localized_bump(const Grid& grid, double width, double norm);

struct InitialSpec {
    std::string generator = "smooth_random";  ///< smooth_random | single_mode | bump | zero
    std::uint64_t seed = 1;
    double norm = 1.0;
    int mode_x = 8;
    int mode_y = 0;
    double width = 4.0;
};

Field make_initial(const Grid& grid, const InitialSpec& spec);

}  // namespace nlsh
