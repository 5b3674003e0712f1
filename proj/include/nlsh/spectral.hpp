#pragma once

#include "nlsh/field.hpp"

#include <complex>
#include <span>
#include <vector>

namespace nlsh {

using Complex = std::complex<double>;

namespace fft {

/// Unnormalized real-to-complex transform of a row-major n0 x n1 array into
/// n0 x (n1/2 + 1) coefficients. Plans are cached process-wide; execution is
/// thread-safe.
void forward(int n0, int n1, std::span<const double> in, std::span<Complex> out);
/// Inverse of forward, including the 1/(n0*n1) normalization.
void inverse(int n0, int n1, std::span<const Complex> in, std::span<double> out);

}  // namespace fft

/// Fourier coefficients of a real field on a periodic grid (half-spectrum in y).
class SpectralField {
public:
    explicit SpectralField(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    int nkx() const noexcept { return grid_.nx(); }
    int nky() const noexcept { return grid_.ny() / 2 + 1; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex& operator()(int i, int j) noexcept { return coeffs_[static_cast<std::size_t>(i) * nky() + j]; }
    Complex operator()(int i, int j) const noexcept { return coeffs_[static_cast<std::size_t>(i) * nky() + j]; }
    Complex& operator[](std::size_t k) noexcept { return coeffs_[k]; }
    Complex operator[](std::size_t k) const noexcept { return coeffs_[k]; }

    std::span<Complex> coeffs() noexcept { return coeffs_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

private:
    Grid grid_;
    std::vector<Complex> coeffs_;
};

SpectralField to_spectral(const Field& f);
Field to_physical(const SpectralField& s);

/// Angular wavenumber (radians per unit length) of spectral row i.
double wavenumber_x(const Grid& grid, int i) noexcept;
/// Angular wavenumber of spectral column j (non-negative half-spectrum).
double wavenumber_y(const Grid& grid, int j) noexcept;

/// |k|^2 for every coefficient of the half-spectrum, in storage order.
std::vector<double> wavenumber_squared(const Grid& grid);

}  // namespace nlsh
