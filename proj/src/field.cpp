#include "nlsh/field.hpp"

#include "nlsh/error.hpp"

#include <algorithm>
#include <cmath>

namespace nlsh {

std::string_view to_string(Boundary bc) {
    return bc == Boundary::Periodic ? "periodic" : "clamped";
}

Boundary boundary_from_string(std::string_view name) {
    if (name == "periodic" || name == "Periodic") return Boundary::Periodic;
    if (name == "clamped" || name == "Clamped") return Boundary::Clamped;
    throw InvalidArgument("unknown boundary mode '" + std::string(name) + "'");
}

Grid::Grid(int nx, int ny, double lx, double ly, Boundary bc)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly), bc_(bc) {
    if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0) {
        throw InvalidArgument("grid: nx, ny must be even and >= 8 (got " + std::to_string(nx) +
                              "x" + std::to_string(ny) + ")");
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw InvalidArgument("grid: extents must be positive and finite");
    }
}

double Grid::hx() const noexcept {
    return bc_ == Boundary::Periodic ? lx_ / nx_ : lx_ / (nx_ - 1);
}

double Grid::hy() const noexcept {
    return bc_ == Boundary::Periodic ? ly_ / ny_ : ly_ / (ny_ - 1);
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("field: value count " + std::to_string(values_.size()) +
                              " does not match grid size " + std::to_string(grid_.size()));
    }
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "field +=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "field -=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double s) noexcept {
    for (double& v : values_) v *= s;
    return *this;
}

Field& Field::axpy(double s, const Field& other) {
    require_same_grid(*this, other, "field axpy");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * other.values_[k];
    return *this;
}

void Field::fill(double v) noexcept { std::fill(values_.begin(), values_.end(), v); }

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void Field::zero_ring() noexcept {
    if (grid_.bc() != Boundary::Clamped) return;
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    for (int j = 0; j < ny; ++j) {
        (*this)(0, j) = 0.0;
        (*this)(nx - 1, j) = 0.0;
    }
    for (int i = 0; i < nx; ++i) {
        (*this)(i, 0) = 0.0;
        (*this)(i, ny - 1) = 0.0;
    }
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field hadamard(const Field& a, const Field& b) {
    require_same_grid(a, b, "hadamard");
    Field out(a.grid());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
    return out;
}

void require_finite(const Field& f, std::string_view what) {
    const auto v = f.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) throw NonFiniteError(std::string(what), k);
    }
}

void require_same_grid(const Field& a, const Field& b, std::string_view what) {
    if (!(a.grid() == b.grid())) {
        throw InvalidArgument(std::string(what) + ": fields live on different grids");
    }
}

}  // namespace nlsh
