#include "oracles.hpp"

#include "nlsh/bench.hpp"
#include "nlsh/error.hpp"
#include "nlsh/kernel.hpp"
#include "nlsh/operators.hpp"

#include <doctest.h>

using namespace nlsh;

namespace {

double max_dev(const Field& a, const Field& b) {
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

TEST_CASE("kernel values follow the closed forms") {
    const Kernel g = Kernel::gaussian_floor(1, 3, 2);
    const auto og = oracle::gaussian_floor(1, 3, 2);
    const Kernel c = Kernel::cosine_bump(0.5, 2, 3);
    const auto oc = oracle::cosine_bump(0.5, 2, 3);
    for (double r : {0.0, 0.3, 1.0, 2.9, 3.0, 5.0}) {
        CHECK(g(r) == doctest::Approx(og(r)).epsilon(1e-15));
        CHECK(c(r) == doctest::Approx(oc(r)).epsilon(1e-15));
    }
    CHECK(Kernel::constant(2)(7.0) == 2.0);
}

TEST_CASE("gaussian_floor b=1 a=3 sigma=2 bounds") {
    const Kernel k = Kernel::parse("gaussian_floor b=1 a=3 sigma=2");
    const auto b = k.bounds();
    CHECK(b.a == 3.0);
    CHECK(b.b == 1.0);
    CHECK(b.k1 == doctest::Approx(0.8578).epsilon(1e-4));
    CHECK(b.k2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("closed-form derivative bounds match dense sampling") {
    struct Case {
        Kernel k;
        oracle::Radial g;
        double r_max;
    };
    const std::vector<Case> cases{
        {Kernel::gaussian_floor(1, 3, 2), oracle::gaussian_floor(1, 3, 2), 20},
        {Kernel::gaussian_floor(0.5, 4, 0.7), oracle::gaussian_floor(0.5, 4, 0.7), 7},
        {Kernel::cosine_bump(1, 3, 4), oracle::cosine_bump(1, 3, 4), 4},
        {Kernel::cosine_bump(2, 2.5, 1.5), oracle::cosine_bump(2, 2.5, 1.5), 1.5},
    };
    for (const auto& c : cases) {
        const auto s = oracle::sampled_bounds(c.g, c.r_max);
        const auto b = c.k.bounds();
        CHECK(b.k1 == doctest::Approx(s.k1).epsilon(1e-5));
        CHECK(b.k2 == doctest::Approx(s.k2).epsilon(1e-3));
        // Sampled values never exceed the closed forms.
        CHECK(s.k1 <= b.k1 * (1 + 1e-9));
    }
    CHECK(Kernel::constant(3).bounds().k1 == 0.0);
}

TEST_CASE("kernel parsing rejects malformed specs") {
    CHECK(Kernel::parse("constant g=2").bounds().a == 2.0);
    CHECK(Kernel::parse("cosine_bump b=1 a=3 rho=4").bounds().b == 1.0);
    CHECK_THROWS_AS(Kernel::parse("gaussian_floor b=1 a=3"), InvalidArgument);
    CHECK_THROWS_AS(Kernel::parse("gaussian_floor b=1 a=3 sigma=2 extra=1"), InvalidArgument);
    CHECK_THROWS_AS(Kernel::parse("tophat b=1"), InvalidArgument);
    CHECK_THROWS_AS(Kernel::gaussian_floor(0, 3, 1), InvalidArgument);
    CHECK_THROWS_AS(Kernel::gaussian_floor(2, 1, 1), InvalidArgument);
    CHECK_THROWS_AS(Kernel::constant(-1), InvalidArgument);
}

TEST_CASE("transform convolution matches the brute-force oracle") {
    const std::vector<std::pair<Kernel, oracle::Radial>> kernels{
        {Kernel::gaussian_floor(1, 3, 2), oracle::gaussian_floor(1, 3, 2)},
        {Kernel::cosine_bump(1, 2, 3), oracle::cosine_bump(1, 2, 3)},
        {Kernel::constant(2), oracle::constant(2)},
    };
    for (Boundary bc : {Boundary::Periodic, Boundary::Clamped}) {
        const Grid g(12, 10, 6.0, 5.0, bc);
        for (const auto& [k, ok] : kernels) {
            for (ConvolutionMode mode : {ConvolutionMode::Circular, ConvolutionMode::ZeroPadded}) {
                const NonlocalOperator op(k, g, mode);
                const Field f = oracle::random_field(g, 21);
                const Field ref = oracle::convolution(ok, f, mode == ConvolutionMode::Circular);
                INFO(k.describe(), " bc=", static_cast<int>(bc), " mode=", static_cast<int>(mode));
                CHECK(max_dev(op.weight_signed(f), ref) < 1e-10);
            }
        }
    }
}

TEST_CASE("direct quadrature strategies agree with the oracle") {
    const Grid g(16, 16, 8.0, 8.0, Boundary::Periodic);
    const Field f = oracle::random_field(g, 4);
    const Kernel k = Kernel::gaussian_floor(1, 3, 2);
    for (ConvolutionMode mode : {ConvolutionMode::Circular, ConvolutionMode::ZeroPadded}) {
        const Field ref = oracle::convolution(oracle::gaussian_floor(1, 3, 2), f, mode == ConvolutionMode::Circular);
        CHECK(max_dev(direct_quadrature(k, f, mode, 1), ref) < 1e-10);
        CHECK(max_dev(direct_quadrature(k, f, mode, 3), ref) < 1e-10);
    }
}

TEST_CASE("weight rejects negative densities") {
    const Grid g(8, 8, 4, 4, Boundary::Periodic);
    const NonlocalOperator op(Kernel::constant(1), g, ConvolutionMode::Circular);
    Field f(g);
    f(1, 1) = -0.5;
    CHECK_THROWS_AS(op.weight(f), InvalidArgument);
    CHECK_THROWS_AS(NonlocalOperator(Kernel::constant(1), g, ConvolutionMode::Circular).weight(Field(Grid(8, 8, 4, 5, Boundary::Periodic))),
                    InvalidArgument);
}

TEST_CASE("quartic sandwich b|u|^4 <= <u^2, G*u^2> <= a|u|^4") {
    for (Boundary bc : {Boundary::Periodic, Boundary::Clamped}) {
        const Grid g(16, 16, 10, 10, bc);
        const NonlocalOperator op(Kernel::gaussian_floor(1, 3, 2), g, default_mode(bc));
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Field u = oracle::random_field(g, seed);
            const auto s = sandwich_check(op, u);
            CHECK(s.lo <= s.val * (1 + 1e-12));
            CHECK(s.val <= s.hi * (1 + 1e-12));
            const double n2 = oracle::quad_inner(u, u);
            CHECK(s.lo == doctest::Approx(n2 * n2).epsilon(1e-12));
        }
    }
}

TEST_CASE("constant kernel convolution is g times the integral") {
    const Grid g(12, 12, 3, 3, Boundary::Periodic);
    const Field f = oracle::random_field(g, 8);
    Field one(g);
    one.fill(1.0);
    const double total = oracle::quad_inner(f, one);
    const Field w = NonlocalOperator(Kernel::constant(2.5), g, ConvolutionMode::Circular).weight_signed(f);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(w[k] == doctest::Approx(2.5 * total).epsilon(1e-11));
}
