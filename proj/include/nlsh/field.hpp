#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlsh {

enum class Boundary { Periodic, Clamped };

std::string_view to_string(Boundary bc);
Boundary boundary_from_string(std::string_view name);

/// Uniform rectangular discretization of [0,lx] x [0,ly].
///
/// Periodic grids place nx points at x_i = i*lx/nx (the point x = lx is the
/// image of x = 0). Clamped grids place nx points at x_i = i*lx/(nx-1) so
/// that both walls carry a node; the outermost ring of nodes is the boundary
/// and holds u = 0.
class Grid {
public:
    Grid(int nx, int ny, double lx, double ly, Boundary bc);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    double lx() const noexcept { return lx_; }
    double ly() const noexcept { return ly_; }
    Boundary bc() const noexcept { return bc_; }

    double hx() const noexcept;
    double hy() const noexcept;
    double cell_area() const noexcept { return hx() * hy(); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

    double x(int i) const noexcept { return i * hx(); }
    double y(int j) const noexcept { return j * hy(); }

    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(i) * ny_ + j;
    }
    bool on_ring(int i, int j) const noexcept {
        return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int nx_;
    int ny_;
    double lx_;
    double ly_;
    Boundary bc_;
};

/// Real scalar field sampled on a Grid, stored row-major with shape (nx, ny):
/// value(i, j) lives at i*ny + j, i running along x.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int i, int j) noexcept { return values_[grid_.index(i, j)]; }
    double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s) noexcept;
    /// this += s * other
    Field& axpy(double s, const Field& other);

    void fill(double v) noexcept;
    double max_abs() const noexcept;
    /// Zeroes the boundary ring; a no-op on periodic grids.
    void zero_ring() noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
/// Pointwise product.
Field hadamard(const Field& a, const Field& b);

/// Throws NonFiniteError naming the first offending index.
void require_finite(const Field& f, std::string_view what);
/// Throws InvalidArgument when the two fields live on different grids.
void require_same_grid(const Field& a, const Field& b, std::string_view what);

}  // namespace nlsh
