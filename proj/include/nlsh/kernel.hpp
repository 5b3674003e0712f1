#pragma once

#include "nlsh/field.hpp"
#include "nlsh/spectral.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace nlsh {

/// Closed-form bounds of a radial kernel: b <= G <= a, k1 = sup|grad G|,
/// k2 = sup|lap G|.
struct KernelBounds {
    double a = 0.0;
    double b = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
};

/// Radially symmetric kernel G(r) bounded between two positive constants.
///
///   constant(g):              G = g
///   gaussian_floor(b, a, s):  G = b + (a - b) exp(-r^2 / s^2)
///   cosine_bump(b, a, rho):   G = b + (a - b) (1 + cos(pi r / rho)) / 2 for r < rho,
///                             G = b beyond rho
class Kernel {
public:
    enum class Family { Constant, GaussianFloor, CosineBump };

    static Kernel constant(double g);
    static Kernel gaussian_floor(double b, double a, double sigma);
    static Kernel cosine_bump(double b, double a, double rho);

    /// Parses "constant g=2", "gaussian_floor b=1 a=3 sigma=2" or
    /// "cosine_bump b=1 a=3 rho=4".
    static Kernel parse(std::string_view spec);

    Family family() const noexcept { return family_; }
    double operator()(double r) const noexcept;
    /// dG/dr and the radial Laplacian G'' + G'/r (its r -> 0 limit at r = 0).
    double radial_derivative(double r) const noexcept;
    double radial_laplacian(double r) const noexcept;

    KernelBounds bounds() const noexcept;
    std::string describe() const;

private:
    Kernel(Family family, double b, double a, double scale);

    Family family_;
    double b_;
    double a_;
    double scale_;
};

KernelBounds kernel_bounds(const Kernel& k);

enum class ConvolutionMode { Circular, ZeroPadded };

std::string_view to_string(ConvolutionMode mode);
/// Circular for periodic grids, ZeroPadded for clamped ones.
ConvolutionMode default_mode(Boundary bc) noexcept;

/// Precomputed kernel transform for evaluating
///   w(x) = sum_xi G(dist(x, xi)) f(xi) hx hy
/// on one grid. Circular uses torus distance and a circular convolution;
/// ZeroPadded uses Euclidean distance restricted to the rectangle and a linear
/// convolution on a (2nx) x (2ny) zero-padded extension.
///
/// Immutable after construction and safe to share across threads.
class NonlocalOperator {
public:
    NonlocalOperator(const Kernel& kernel, const Grid& grid, ConvolutionMode mode);

    const Kernel& kernel() const noexcept { return kernel_; }
    const Grid& grid() const noexcept { return grid_; }
    ConvolutionMode mode() const noexcept { return mode_; }

    /// w for a nonnegative density (typically u^2). Rejects negative entries.
    Field weight(const Field& usq) const;
    /// Same convolution without the sign precondition (used for u*v).
    Field weight_signed(const Field& f) const;

private:
    Kernel kernel_;
    Grid grid_;
    ConvolutionMode mode_;
    int n0_;
    int n1_;
    std::vector<Complex> kernel_hat_;
};

/// lo = b |u|^4, val = <u^2, w(u^2)>, hi = a |u|^4.
struct Sandwich {
    double lo = 0.0;
    double val = 0.0;
    double hi = 0.0;
};
Sandwich sandwich_check(const NonlocalOperator& op, const Field& u);

}  // namespace nlsh
