#include "oracles.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"
#include "nlsh/snapshot.hpp"
#include "nlsh/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace nlsh;

TEST_CASE("grid spacing and validation") {
    const Grid p(16, 8, 2.0, 1.0, Boundary::Periodic);
    CHECK(p.hx() == doctest::Approx(0.125));
    CHECK(p.hy() == doctest::Approx(0.125));
    const Grid c(16, 8, 1.5, 0.7, Boundary::Clamped);
    CHECK(c.hx() == doctest::Approx(0.1));
    CHECK(c.hy() == doctest::Approx(0.1));
    CHECK_THROWS_AS(Grid(7, 8, 1, 1, Boundary::Periodic), InvalidArgument);
    CHECK_THROWS_AS(Grid(6, 8, 1, 1, Boundary::Periodic), InvalidArgument);
    CHECK_THROWS_AS(Grid(8, 8, 0, 1, Boundary::Periodic), InvalidArgument);
    CHECK(boundary_from_string("clamped") == Boundary::Clamped);
    CHECK_THROWS_AS(boundary_from_string("dirichlet"), InvalidArgument);
}

TEST_CASE("field arithmetic and finiteness") {
    const Grid g(8, 8, 1, 1, Boundary::Periodic);
    Field a(g), b(g);
    a.fill(2.0);
    b.fill(3.0);
    const Field c = a + 2.0 * b;
    CHECK(c(3, 4) == 8.0);
    CHECK(hadamard(a, b)(0, 0) == 6.0);
    a.axpy(-1.0, b);
    CHECK(a.max_abs() == 1.0);
    a(2, 5) = std::numeric_limits<double>::quiet_NaN();
    try {
        require_finite(a, "a");
        FAIL("expected NonFiniteError");
    } catch (const NonFiniteError& e) {
        CHECK(e.index() == g.index(2, 5));
    }
    const Field other(Grid(8, 8, 2, 1, Boundary::Periodic));
    CHECK_THROWS_AS(a += other, InvalidArgument);
}

TEST_CASE("inner product matches independent quadrature") {
    for (Boundary bc : {Boundary::Periodic, Boundary::Clamped}) {
        const Grid g(12, 10, 3.0, 2.0, bc);
        const Field f = oracle::random_field(g, 1), h = oracle::random_field(g, 2);
        CHECK(inner(f, h) == doctest::Approx(oracle::quad_inner(f, h)).epsilon(1e-13));
    }
}

TEST_CASE("FFT round trip") {
    const Grid g(16, 12, 4.0, 3.0, Boundary::Periodic);
    const Field f = oracle::random_field(g, 5);
    const Field back = to_physical(to_spectral(f));
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(back[k] == doctest::Approx(f[k]).epsilon(1e-13));
}

TEST_CASE("periodic operators are exact on Fourier modes") {
    const double lx = 4.0, ly = 6.0;
    const Grid g(32, 24, lx, ly, Boundary::Periodic);
    const double kx = 2 * M_PI * 3 / lx, ky = 2 * M_PI * 2 / ly, k2 = kx * kx + ky * ky;
    Field f(g);
    for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) f(i, j) = std::sin(kx * g.x(i) + ky * g.y(j));
    const Field lap = laplacian(f);
    const Field bih = biharmonic(f);
    const auto [fx, fy] = gradient(f);
    double e_lap = 0, e_bih = 0, e_gx = 0, e_gy = 0;
    for (int i = 0; i < g.nx(); ++i) {
        for (int j = 0; j < g.ny(); ++j) {
            const double ph = kx * g.x(i) + ky * g.y(j);
            e_lap = std::max(e_lap, std::abs(lap(i, j) + k2 * std::sin(ph)));
            e_bih = std::max(e_bih, std::abs(bih(i, j) - k2 * k2 * std::sin(ph)));
            e_gx = std::max(e_gx, std::abs(fx(i, j) - kx * std::cos(ph)));
            e_gy = std::max(e_gy, std::abs(fy(i, j) - ky * std::cos(ph)));
        }
    }
    CHECK(e_lap < 1e-11);
    CHECK(e_bih < 1e-12 * k2 * k2);
    CHECK(e_gx < 1e-11);
    CHECK(e_gy < 1e-11);
    const auto s = h2_seminorms(f);
    const double norm = std::sqrt(lx * ly / 2);
    CHECK(s.grad == doctest::Approx(std::sqrt(k2) * norm).epsilon(1e-12));
    CHECK(s.lap == doctest::Approx(k2 * norm).epsilon(1e-12));
}

TEST_CASE("clamped laplacian is the 5-point stencil on the interior") {
    const Grid g(10, 12, 1.0, 1.3, Boundary::Clamped);
    const Field f = oracle::random_field(g, 9);
    const Field lap = laplacian(f);
    const double hx = 1.0 / 9, hy = 1.3 / 11;
    for (int i = 1; i < g.nx() - 1; ++i) {
        for (int j = 1; j < g.ny() - 1; ++j) {
            const double ref = (f(i + 1, j) - 2 * f(i, j) + f(i - 1, j)) / (hx * hx) +
                               (f(i, j + 1) - 2 * f(i, j) + f(i, j - 1)) / (hy * hy);
            CHECK(lap(i, j) == doctest::Approx(ref).epsilon(1e-12));
        }
    }
    CHECK(lap(0, 3) == 0.0);
}

TEST_CASE("clamped biharmonic is symmetric positive and matches |B f|^2") {
    const Grid g(12, 12, 2.0, 2.0, Boundary::Clamped);
    const Field f = oracle::random_field(g, 3), h = oracle::random_field(g, 4);
    CHECK(inner(biharmonic(f), h) == doctest::Approx(inner(f, biharmonic(h))).epsilon(1e-11));
    const Field bf = laplacian_with_ring(f);
    CHECK(inner(biharmonic(f), f) == doctest::Approx(inner(bf, bf)).epsilon(1e-11));
    CHECK(inner(biharmonic(f), f) > 0.0);
    // -<lap f, f> is the squared gradient norm and must be positive.
    CHECK(-inner(laplacian(f), f) > 0.0);
    Field bad = f;
    bad(0, 4) = 1.0;
    CHECK_THROWS_AS(laplacian(bad), InvalidArgument);
}

TEST_CASE("clamped operators converge at second order") {
    // u = sin^2(pi x) sin^2(pi y) on the unit square vanishes with its normal
    // derivative on the walls.
    auto u = [](double x, double y) { return std::pow(std::sin(M_PI * x) * std::sin(M_PI * y), 2); };
    auto lap_u = [](double x, double y) {
        const double sx = std::sin(M_PI * x), sy = std::sin(M_PI * y);
        const double c2x = std::cos(2 * M_PI * x), c2y = std::cos(2 * M_PI * y);
        return 2 * M_PI * M_PI * (c2x * sy * sy + c2y * sx * sx);
    };
    std::vector<double> errs;
    for (int n : {18, 34, 66}) {
        const Grid g(n, n, 1.0, 1.0, Boundary::Clamped);
        Field f(g);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) f(i, j) = u(g.x(i), g.y(j));
        f.zero_ring();
        const Field lap = laplacian(f);
        double e = 0;
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j) e = std::max(e, std::abs(lap(i, j) - lap_u(g.x(i), g.y(j))));
        errs.push_back(e);
    }
    CHECK(std::log2(errs[0] / errs[1]) > 1.8);
    CHECK(std::log2(errs[1] / errs[2]) > 1.8);
}

TEST_CASE("snapshot round trip and byte layout") {
    const Grid g(8, 10, 1.25, 2.5, Boundary::Clamped);
    const Field f = oracle::random_field(g, 11);
    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    write_snapshot(buf, f, 3.75);
    const std::string bytes = buf.str();
    REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 8 + 8 + 1 + 8 + 8 * 80);
    CHECK(bytes.substr(0, 4) == "SH2D");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[8]) == 8);
    CHECK(static_cast<unsigned char>(bytes[12]) == 10);
    CHECK(static_cast<unsigned char>(bytes[32]) == 1);
    const Snapshot s = read_snapshot(buf);
    CHECK(s.time == 3.75);
    CHECK(s.field.grid() == g);
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(s.field[k] == f[k]);

    std::string broken = bytes;
    broken[0] = 'X';
    std::istringstream in(broken);
    CHECK_THROWS_AS(read_snapshot(in), Error);
    std::istringstream truncated(bytes.substr(0, 50));
    CHECK_THROWS_AS(read_snapshot(truncated), Error);
}
