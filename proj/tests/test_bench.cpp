#include "nlsh/bench.hpp"
#include "nlsh/error.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace nlsh;

TEST_CASE("all strategies agree with the oracle at 16x16") {
    const std::vector<int> sizes{8, 16};
    const std::vector<Strategy> all{Strategy::DirectCircular,         Strategy::DirectZeroPadded,
                                    Strategy::TransformCircular,      Strategy::TransformZeroPadded,
                                    Strategy::DirectCircularThreaded, Strategy::DirectZeroPaddedThreaded};
    BenchOptions opt;
    opt.repeats = 1;
    opt.min_batch_ns = 0;
    opt.threads = 2;
    const auto res = run_bench(sizes, Kernel::gaussian_floor(1, 3, 2), all, opt);
    CHECK(res.size() == sizes.size() * all.size());
    for (const auto& r : res) {
        REQUIRE(r.max_dev.has_value());
        CHECK(*r.max_dev < 1e-8);
        CHECK(r.median_ns > 0);
    }
}

TEST_CASE("oracle is skipped above the limit and direct above its cap") {
    const std::vector<int> sizes{16, 64};
    const std::vector<Strategy> s{Strategy::TransformCircular, Strategy::DirectCircular};
    BenchOptions opt;
    opt.repeats = 1;
    opt.min_batch_ns = 0;
    opt.direct_limit = 16;
    const auto res = run_bench(sizes, Kernel::constant(1), s, opt);
    REQUIRE(res.size() == 3);
    CHECK(res[2].n == 64);
    CHECK(res[2].strategy == Strategy::TransformCircular);
    CHECK(!res[2].max_dev.has_value());
    const std::string csv = bench_csv(res);
    CHECK(csv.rfind("strategy,n,median_ns,max_dev\n", 0) == 0);
    CHECK(csv.find("transform_circular,64,") != std::string::npos);
    CHECK(csv.back() == '\n');
}

TEST_CASE("log-log slope of synthetic timings") {
    std::vector<BenchResult> res;
    for (int n : {8, 16, 32, 64}) res.push_back({Strategy::DirectCircular, n, 3.0 * std::pow(n, 4.0), std::nullopt});
    CHECK(loglog_slope(res, Strategy::DirectCircular, 8, 64).value() == doctest::Approx(4.0));
    CHECK(loglog_slope(res, Strategy::DirectCircular, 8, 16).value() == doctest::Approx(4.0));
    CHECK(!loglog_slope(res, Strategy::DirectCircular, 8, 8).has_value());
    CHECK(!loglog_slope(res, Strategy::TransformCircular, 8, 64).has_value());
}

TEST_CASE("strategy names and input checks") {
    CHECK(strategy_from_string("direct_zero_padded_mt") == Strategy::DirectZeroPaddedThreaded);
    CHECK(to_string(Strategy::TransformZeroPadded) == "transform_zero_padded");
    CHECK_THROWS_AS(strategy_from_string("fmm"), InvalidArgument);
    const std::vector<int> unsorted{16, 8};
    const std::vector<Strategy> s{Strategy::TransformCircular};
    CHECK_THROWS_AS(run_bench(unsorted, Kernel::constant(1), s), InvalidArgument);
}
