#pragma once

#include "nlsh/kernel.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nlsh {

enum class Strategy {
    DirectCircular,
    DirectZeroPadded,
    TransformCircular,
    TransformZeroPadded,
    DirectCircularThreaded,
    DirectZeroPaddedThreaded,
};

std::string_view to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);
ConvolutionMode mode_of(Strategy s) noexcept;

/// O(N^4) rectangle-rule quadrature of w(x) = sum_xi G(dist(x, xi)) f(xi) hx hy.
/// threads > 1 splits the output rows across std::threads.
Field direct_quadrature(const Kernel& kernel, const Field& f, ConvolutionMode mode, int threads = 1);

struct BenchResult {
    Strategy strategy;
    int n = 0;
    double median_ns = 0.0;
    std::optional<double> max_dev;  ///< vs the long-double oracle; empty above oracle_limit
};

struct BenchOptions {
    int repeats = 5;            ///< timed runs per point (median taken) after one batch-length warm-up
    int oracle_limit = 48;      ///< largest n with an oracle comparison
    double min_batch_ns = 2e6;  ///< calls are batched so one timed run lasts at least this long
    int threads = 1;            ///< for the *Threaded strategies
    std::uint64_t seed = 7;
    /// Skip direct strategies above this size (they are O(n^4)).
    int direct_limit = 64;
};

/// Runs every (size, strategy) pair on an n x n periodic grid with lx = ly = n
/// (unit spacing) and a seeded random density.
std::vector<BenchResult> run_bench(std::span<const int> sizes, const Kernel& kernel,
                                   std::span<const Strategy> strategies, const BenchOptions& options = {});

/// Least-squares slope of log(median_ns) against log(n) for one strategy,
/// restricted to n in [n_min, n_max]. Needs at least two points.
std::optional<double> loglog_slope(std::span<const BenchResult> results, Strategy strategy, int n_min, int n_max);

/// strategy,n,median_ns,max_dev (max_dev empty when skipped).
std::string bench_csv(std::span<const BenchResult> results);

}  // namespace nlsh
