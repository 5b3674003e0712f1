#include "oracles.hpp"

#include "nlsh/error.hpp"
#include "nlsh/theory.hpp"

#include <doctest.h>

#include <cmath>

using namespace nlsh;

TEST_CASE("closed-form bounds for mu=0.4, a=3, b=1, C=1") {
    const theory::Inputs in{0.4, 3.0, 1.0, 1.0};
    const auto nl = theory::bound_nonlocal(in);
    CHECK(nl.m_est == doctest::Approx(2.5492).epsilon(1e-4));
    CHECK(nl.eps_opt == doctest::Approx(nl.m_est));
    CHECK(theory::bound_local(0.4, 1.0) == doctest::Approx(1.6325).epsilon(1e-4));
    CHECK(theory::gap(in) == doctest::Approx(nl.m_est - theory::bound_local(0.4)));
    CHECK(theory::nonlocal_excess(in) == doctest::Approx(2.0));
}

TEST_CASE("constant kernel bound is 1 + sqrt(2 mu)") {
    const theory::Inputs in{0.5, 1.7, 1.7, 1.0};
    CHECK(theory::bound_nonlocal(in).m_est == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(theory::bound_constant_kernel(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(theory::bound_constant_kernel(0.3, 2.0) == doctest::Approx(2.0 * (1 + std::sqrt(0.6))));
}

TEST_CASE("threshold minimizer matches eps_opt") {
    for (const theory::Inputs in : {theory::Inputs{0.4, 3, 1, 1}, theory::Inputs{0.1, 1, 1, 2},
                                    theory::Inputs{2.0, 5, 0.5, 0.3}, theory::Inputs{0.9, 2, 1.5, 1}}) {
        const double eps = oracle::golden_min([&](double e) { return theory::threshold_nonlocal(in, e); }, 1.0 + 1e-9,
                                              50.0, 1e-13);
        CHECK(eps == doctest::Approx(theory::bound_nonlocal(in).eps_opt).epsilon(1e-6));
        // At the optimum the threshold equals sqrt(C) (1 + q).
        const double q = theory::bound_nonlocal(in).eps_opt - 1.0;
        CHECK(theory::threshold_nonlocal(in, 1 + q) == doctest::Approx(std::sqrt(in.C) * (1 + q)).epsilon(1e-12));
    }
    const double el = oracle::golden_min([](double e) { return theory::threshold_local(0.4, 1.0, e); }, 1.0 + 1e-9, 50.0,
                                         1e-13);
    CHECK(el == doctest::Approx(theory::eps_opt_local(0.4)).epsilon(1e-6));
}

TEST_CASE("nonlocal bound dominates the local one when 2a >= b") {
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            for (int k = 0; k < 20; ++k) {
                const double mu = 0.05 + 0.1 * i;
                const double b = 0.1 + 0.2 * j;
                const double a = b * (0.5 + 0.15 * k);
                if (a < b) continue;
                const theory::Inputs in{mu, a, b, 1.0};
                CHECK(theory::bound_nonlocal(in).m_est >= theory::bound_local(mu));
            }
        }
    }
}

TEST_CASE("monotonicity in mu and a") {
    double prev = 0;
    for (double mu = 0.1; mu < 3; mu += 0.1) {
        const double m = theory::bound_nonlocal({mu, 2, 1, 1}).m_est;
        CHECK(m > prev);
        prev = m;
    }
    CHECK(theory::bound_nonlocal({0.4, 4, 1, 1}).m_est > theory::bound_nonlocal({0.4, 3, 1, 1}).m_est);
}

TEST_CASE("Poincare constant and validation") {
    CHECK(theory::poincare_lambda1(1.0, 1.0) == doctest::Approx(2 * M_PI * M_PI));
    CHECK(theory::poincare_lambda1(16 * M_PI, 16 * M_PI) == doctest::Approx(2.0 / 256.0));
    CHECK_THROWS_AS(theory::validate({0.0, 1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(theory::validate({0.4, 1, 2, 1}), InvalidArgument);
    CHECK_THROWS_AS(theory::validate({0.4, 1, 1, 0}), InvalidArgument);
    CHECK_THROWS_AS(theory::threshold_nonlocal({0.4, 1, 1, 1}, 1.0), InvalidArgument);
}
