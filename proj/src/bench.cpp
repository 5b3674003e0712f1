#include "nlsh/bench.hpp"

#include "nlsh/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace nlsh {
namespace {

// Kernel values indexed by absolute lag (di, dj).
template <typename Real>
std::vector<Real> lag_table(const Kernel& kernel, const Grid& g, ConvolutionMode mode) {
    std::vector<Real> table(g.size());
    for (int di = 0; di < g.nx(); ++di) {
        const int lx = mode == ConvolutionMode::Circular ? std::min(di, g.nx() - di) : di;
        for (int dj = 0; dj < g.ny(); ++dj) {
            const int ly = mode == ConvolutionMode::Circular ? std::min(dj, g.ny() - dj) : dj;
            table[g.index(di, dj)] = static_cast<Real>(kernel(std::hypot(lx * g.hx(), ly * g.hy())));
        }
    }
    return table;
}

template <typename Real>
void quadrature_rows(const std::vector<Real>& table, const Field& f, Field& out, int row_begin, int row_end) {
    const Grid& g = f.grid();
    const int nx = g.nx();
    const int ny = g.ny();
    const Real area = static_cast<Real>(g.cell_area());
    for (int i = row_begin; i < row_end; ++i) {
        for (int j = 0; j < ny; ++j) {
            Real acc = 0;
            for (int p = 0; p < nx; ++p) {
                const Real* trow = &table[static_cast<std::size_t>(std::abs(i - p)) * ny];
                const double* frow = f.data() + static_cast<std::size_t>(p) * ny;
                for (int q = 0; q < ny; ++q) acc += trow[std::abs(j - q)] * static_cast<Real>(frow[q]);
            }
            out(i, j) = static_cast<double>(acc * area);
        }
    }
}

Field oracle(const Kernel& kernel, const Field& f, ConvolutionMode mode) {
    const auto table = lag_table<long double>(kernel, f.grid(), mode);
    Field out(f.grid());
    quadrature_rows(table, f, out, 0, f.grid().nx());
    return out;
}

}  // namespace

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::DirectCircular: return "direct_circular";
    case Strategy::DirectZeroPadded: return "direct_zero_padded";
    case Strategy::TransformCircular: return "transform_circular";
    case Strategy::TransformZeroPadded: return "transform_zero_padded";
    case Strategy::DirectCircularThreaded: return "direct_circular_mt";
    case Strategy::DirectZeroPaddedThreaded: return "direct_zero_padded_mt";
    }
    return "?";
}

Strategy strategy_from_string(std::string_view name) {
    for (Strategy s : {Strategy::DirectCircular, Strategy::DirectZeroPadded, Strategy::TransformCircular,
                       Strategy::TransformZeroPadded, Strategy::DirectCircularThreaded,
                       Strategy::DirectZeroPaddedThreaded}) {
        if (to_string(s) == name) return s;
    }
    throw InvalidArgument("unknown bench strategy '" + std::string(name) + "'");
}

ConvolutionMode mode_of(Strategy s) noexcept {
    switch (s) {
    case Strategy::DirectCircular:
    case Strategy::TransformCircular:
    case Strategy::DirectCircularThreaded:
        return ConvolutionMode::Circular;
    default:
        return ConvolutionMode::ZeroPadded;
    }
}

namespace {

Field quadrature_threaded(const std::vector<double>& table, const Field& f, int threads) {
    Field out(f.grid());
    const int nx = f.grid().nx();
    threads = std::clamp(threads, 1, nx);
    if (threads == 1) {
        quadrature_rows(table, f, out, 0, nx);
        return out;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
        const int begin = nx * t / threads;
        const int end = nx * (t + 1) / threads;
        pool.emplace_back([&, begin, end] { quadrature_rows(table, f, out, begin, end); });
    }
    pool.clear();
    return out;
}

}  // namespace

Field direct_quadrature(const Kernel& kernel, const Field& f, ConvolutionMode mode, int threads) {
    return quadrature_threaded(lag_table<double>(kernel, f.grid(), mode), f, threads);
}

std::vector<BenchResult> run_bench(std::span<const int> sizes, const Kernel& kernel,
                                   std::span<const Strategy> strategies, const BenchOptions& options) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw InvalidArgument("run_bench: sizes must be ascending");
    if (options.repeats < 1) throw InvalidArgument("run_bench: repeats must be positive");
    using Clock = std::chrono::steady_clock;
    std::vector<BenchResult> results;
    for (int n : sizes) {
        const Grid grid(n, n, 0.5 * n, 0.5 * n, Boundary::Periodic);
        Field density(grid);
        std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(n));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (double& v : density.values()) v = uni(rng);

        const bool with_oracle = n <= options.oracle_limit;
        std::optional<Field> oracle_circ;
        std::optional<Field> oracle_pad;

        for (Strategy s : strategies) {
            const bool direct = s != Strategy::TransformCircular && s != Strategy::TransformZeroPadded;
            if (direct && n > options.direct_limit) continue;
            const ConvolutionMode mode = mode_of(s);
            const int threads = (s == Strategy::DirectCircularThreaded || s == Strategy::DirectZeroPaddedThreaded)
                                    ? std::max(1, options.threads)
                                    : 1;
            // Kernel setup (lag table or kernel transform) stays outside the timed region.
            std::optional<NonlocalOperator> op;
            std::vector<double> table;
            if (direct) {
                table = lag_table<double>(kernel, grid, mode);
            } else {
                op.emplace(kernel, grid, mode);
            }
            auto run = [&] { return direct ? quadrature_threaded(table, density, threads) : op->weight(density); };

            // Warm-up, also used for the accuracy figure.
            const Field w = run();
            BenchResult r{s, n, 0.0, std::nullopt};
            if (with_oracle) {
                auto& ref = mode == ConvolutionMode::Circular ? oracle_circ : oracle_pad;
                if (!ref) ref = oracle(kernel, density, mode);
                double dev = 0.0;
                for (std::size_t k = 0; k < w.size(); ++k) dev = std::max(dev, std::abs(w[k] - (*ref)[k]));
                r.max_dev = dev;
            }

            // Keep warming up for one batch length so the first timed point is not cold.
            auto t0 = Clock::now();
            long warm_calls = 0;
            do {
                (void)run();
                ++warm_calls;
            } while (std::chrono::duration<double, std::nano>(Clock::now() - t0).count() < options.min_batch_ns);
            const double single =
                std::chrono::duration<double, std::nano>(Clock::now() - t0).count() / static_cast<double>(warm_calls);
            const long batch = std::max<long>(1, static_cast<long>(std::ceil(options.min_batch_ns / std::max(single, 1.0))));
            std::vector<double> samples;
            for (int rep = 0; rep < options.repeats; ++rep) {
                const auto start = Clock::now();
                for (long b = 0; b < batch; ++b) (void)run();
                const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
                samples.push_back(static_cast<double>(ns) / batch);
            }
            std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
            r.median_ns = samples[samples.size() / 2];
            results.push_back(r);
        }
    }
    return results;
}

std::optional<double> loglog_slope(std::span<const BenchResult> results, Strategy strategy, int n_min, int n_max) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : results) {
        if (r.strategy == strategy && r.n >= n_min && r.n <= n_max && r.median_ns > 0.0) {
            pts.emplace_back(std::log(static_cast<double>(r.n)), std::log(r.median_ns));
        }
    }
    if (pts.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxy / sxx;
}

std::string bench_csv(std::span<const BenchResult> results) {
    std::ostringstream out;
    out.precision(10);
    out << "strategy,n,median_ns,max_dev\n";
    for (const auto& r : results) {
        out << to_string(r.strategy) << ',' << r.n << ',' << r.median_ns << ',';
        if (r.max_dev) out << *r.max_dev;
        out << '\n';
    }
    return out.str();
}

}  // namespace nlsh
