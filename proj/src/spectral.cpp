#include "nlsh/spectral.hpp"

#include "nlsh/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

namespace nlsh {
namespace fft {
namespace {

enum class Direction { Forward, Inverse };

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n0, int n1, Direction dir) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(n0, n1, dir);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        // FFTW_ESTIMATE leaves the scratch arrays untouched during planning.
        const auto n_real = static_cast<std::size_t>(n0) * n1;
        const auto n_cplx = static_cast<std::size_t>(n0) * (n1 / 2 + 1);
        double* r = fftw_alloc_real(n_real);
        fftw_complex* c = fftw_alloc_complex(n_cplx);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dir == Direction::Forward
                             ? fftw_plan_dft_r2c_2d(n0, n1, r, c, flags)
                             : fftw_plan_dft_c2r_2d(n0, n1, c, r, flags);
        fftw_free(r);
        fftw_free(c);
        if (plan == nullptr) throw Error("fftw: could not create plan");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, Direction>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

void check_sizes(int n0, int n1, std::size_t n_real, std::size_t n_cplx) {
    if (n_real != static_cast<std::size_t>(n0) * n1 ||
        n_cplx != static_cast<std::size_t>(n0) * (n1 / 2 + 1)) {
        throw InvalidArgument("fft: buffer sizes do not match transform shape");
    }
}

}  // namespace

void forward(int n0, int n1, std::span<const double> in, std::span<Complex> out) {
    check_sizes(n0, n1, in.size(), out.size());
    fftw_plan plan = cache().get(n0, n1, Direction::Forward);
    // r2c never writes its input.
    fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(int n0, int n1, std::span<const Complex> in, std::span<double> out) {
    check_sizes(n0, n1, out.size(), in.size());
    fftw_plan plan = cache().get(n0, n1, Direction::Inverse);
    // c2r destroys its input.
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double scale = 1.0 / (static_cast<double>(n0) * n1);
    for (double& v : out) v *= scale;
}

}  // namespace fft

SpectralField::SpectralField(const Grid& grid)
    : grid_(grid), coeffs_(static_cast<std::size_t>(grid.nx()) * (grid.ny() / 2 + 1)) {}

SpectralField to_spectral(const Field& f) {
    SpectralField s(f.grid());
    fft::forward(f.grid().nx(), f.grid().ny(), f.values(), s.coeffs());
    return s;
}

Field to_physical(const SpectralField& s) {
    Field f(s.grid());
    fft::inverse(s.grid().nx(), s.grid().ny(), s.coeffs(), f.values());
    return f;
}

double wavenumber_x(const Grid& grid, int i) noexcept {
    const int n = grid.nx();
    const int m = i <= n / 2 ? i : i - n;
    return 2.0 * std::numbers::pi * m / grid.lx();
}

double wavenumber_y(const Grid& grid, int j) noexcept {
    return 2.0 * std::numbers::pi * j / grid.ly();
}

std::vector<double> wavenumber_squared(const Grid& grid) {
    const int nky = grid.ny() / 2 + 1;
    std::vector<double> k2(static_cast<std::size_t>(grid.nx()) * nky);
    for (int i = 0; i < grid.nx(); ++i) {
        const double kx = wavenumber_x(grid, i);
        for (int j = 0; j < nky; ++j) {
            const double ky = wavenumber_y(grid, j);
            k2[static_cast<std::size_t>(i) * nky + j] = kx * kx + ky * ky;
        }
    }
    return k2;
}

}  // namespace nlsh
