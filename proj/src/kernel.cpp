#include "nlsh/kernel.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace nlsh {

Kernel::Kernel(Family family, double b, double a, double scale)
    : family_(family), b_(b), a_(a), scale_(scale) {
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw InvalidArgument("kernel: lower bound b must be positive (got " + std::to_string(b) + ")");
    }
    if (!(a >= b) || !std::isfinite(a)) {
        throw InvalidArgument("kernel: need a >= b (got a=" + std::to_string(a) +
                              ", b=" + std::to_string(b) + ")");
    }
    if (family != Family::Constant && (!(scale > 0.0) || !std::isfinite(scale))) {
        throw InvalidArgument("kernel: length scale must be positive");
    }
}

Kernel Kernel::constant(double g) { return Kernel(Family::Constant, g, g, 0.0); }

Kernel Kernel::gaussian_floor(double b, double a, double sigma) {
    return Kernel(Family::GaussianFloor, b, a, sigma);
}

Kernel Kernel::cosine_bump(double b, double a, double rho) {
    return Kernel(Family::CosineBump, b, a, rho);
}

Kernel Kernel::parse(std::string_view spec) {
    std::istringstream in{std::string(spec)};
    std::string name;
    in >> name;
    std::map<std::string, double> params;
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgument("kernel: expected key=value, got '" + token + "'");
        }
        const std::string key = token.substr(0, eq);
        const std::string text = token.substr(eq + 1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw InvalidArgument("kernel: bad number for '" + key + "': '" + text + "'");
        }
        if (!params.emplace(key, value).second) {
            throw InvalidArgument("kernel: duplicate parameter '" + key + "'");
        }
    }
    auto take = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end()) throw InvalidArgument("kernel " + name + ": missing parameter '" + key + "'");
        const double v = it->second;
        params.erase(it);
        return v;
    };
    auto finish = [&](Kernel k) {
        if (!params.empty()) {
            throw InvalidArgument("kernel " + name + ": unknown parameter '" + params.begin()->first + "'");
        }
        return k;
    };
    if (name == "constant") return finish(constant(take("g")));
    if (name == "gaussian_floor") {
        const double b = take("b");
        const double a = take("a");
        return finish(gaussian_floor(b, a, take("sigma")));
    }
    if (name == "cosine_bump") {
        const double b = take("b");
        const double a = take("a");
        return finish(cosine_bump(b, a, take("rho")));
    }
    throw InvalidArgument("kernel: unknown family '" + name + "'");
}

double Kernel::operator()(double r) const noexcept {
    switch (family_) {
    case Family::Constant:
        return a_;
    case Family::GaussianFloor:
        return b_ + (a_ - b_) * std::exp(-(r * r) / (scale_ * scale_));
    case Family::CosineBump:
        if (r >= scale_) return b_;
        return b_ + 0.5 * (a_ - b_) * (1.0 + std::cos(std::numbers::pi * r / scale_));
    }
    return a_;
}

double Kernel::radial_derivative(double r) const noexcept {
    switch (family_) {
    case Family::Constant:
        return 0.0;
    case Family::GaussianFloor: {
        const double s2 = scale_ * scale_;
        return -2.0 * r / s2 * (a_ - b_) * std::exp(-(r * r) / s2);
    }
    case Family::CosineBump:
        if (r >= scale_) return 0.0;
        return -0.5 * (a_ - b_) * (std::numbers::pi / scale_) * std::sin(std::numbers::pi * r / scale_);
    }
    return 0.0;
}

double Kernel::radial_laplacian(double r) const noexcept {
    switch (family_) {
    case Family::Constant:
        return 0.0;
    case Family::GaussianFloor: {
        const double s = r * r / (scale_ * scale_);
        return 4.0 * (a_ - b_) / (scale_ * scale_) * std::exp(-s) * (s - 1.0);
    }
    case Family::CosineBump: {
        if (r >= scale_) return 0.0;
        const double theta = std::numbers::pi * r / scale_;
        const double sinc = theta == 0.0 ? 1.0 : std::sin(theta) / theta;
        const double c = std::numbers::pi * std::numbers::pi / (2.0 * scale_ * scale_);
        return -(a_ - b_) * c * (std::cos(theta) + sinc);
    }
    }
    return 0.0;
}

KernelBounds Kernel::bounds() const noexcept {
    switch (family_) {
    case Family::Constant:
        return {a_, b_, 0.0, 0.0};
    case Family::GaussianFloor:
        // |G'| peaks at r = sigma/sqrt(2); |lap G| peaks at r = 0.
        return {a_, b_, (a_ - b_) * std::sqrt(2.0 / std::numbers::e) / scale_,
                4.0 * (a_ - b_) / (scale_ * scale_)};
    case Family::CosineBump: {
        // |G'| peaks at r = rho/2; cos(t) + sin(t)/t peaks at t = 0 with value 2.
        const double pi = std::numbers::pi;
        return {a_, b_, (a_ - b_) * pi / (2.0 * scale_), (a_ - b_) * pi * pi / (scale_ * scale_)};
    }
    }
    return {a_, b_, 0.0, 0.0};
}

std::string Kernel::describe() const {
    std::ostringstream out;
    out.precision(17);
    switch (family_) {
    case Family::Constant:
        out << "constant g=" << a_;
        break;
    case Family::GaussianFloor:
        out << "gaussian_floor b=" << b_ << " a=" << a_ << " sigma=" << scale_;
        break;
    case Family::CosineBump:
        out << "cosine_bump b=" << b_ << " a=" << a_ << " rho=" << scale_;
        break;
    }
    return out.str();
}

KernelBounds kernel_bounds(const Kernel& k) { return k.bounds(); }

std::string_view to_string(ConvolutionMode mode) {
    return mode == ConvolutionMode::Circular ? "circular" : "zero_padded";
}

ConvolutionMode default_mode(Boundary bc) noexcept {
    return bc == Boundary::Periodic ? ConvolutionMode::Circular : ConvolutionMode::ZeroPadded;
}

NonlocalOperator::NonlocalOperator(const Kernel& kernel, const Grid& grid, ConvolutionMode mode)
    : kernel_(kernel), grid_(grid), mode_(mode) {
    const int nx = grid.nx();
    const int ny = grid.ny();
    n0_ = mode == ConvolutionMode::Circular ? nx : 2 * nx;
    n1_ = mode == ConvolutionMode::Circular ? ny : 2 * ny;
    const double hx = grid.hx();
    const double hy = grid.hy();

    // Offset p in [0, n0) stands for the signed lag p or p - n0, whichever is
    // shorter. For the padded case lags of magnitude n never meet a nonzero
    // product, so their value is irrelevant.
    std::vector<double> samples(static_cast<std::size_t>(n0_) * n1_);
    for (int p = 0; p < n0_; ++p) {
        const double dx = std::min(p, n0_ - p) * hx;
        for (int q = 0; q < n1_; ++q) {
            const double dy = std::min(q, n1_ - q) * hy;
            samples[static_cast<std::size_t>(p) * n1_ + q] = kernel(std::hypot(dx, dy));
        }
    }
    kernel_hat_.resize(static_cast<std::size_t>(n0_) * (n1_ / 2 + 1));
    fft::forward(n0_, n1_, samples, kernel_hat_);
    const double area = grid.cell_area();
    for (Complex& c : kernel_hat_) c *= area;
}

Field NonlocalOperator::weight(const Field& usq) const {
    for (std::size_t k = 0; k < usq.size(); ++k) {
        if (usq[k] < 0.0) {
            throw InvalidArgument("nonlocal_weight: negative density at flat index " + std::to_string(k));
        }
    }
    return weight_signed(usq);
}

Field NonlocalOperator::weight_signed(const Field& f) const {
    if (!(f.grid() == grid_)) throw InvalidArgument("nonlocal_weight: field grid does not match kernel cache");
    require_finite(f, "nonlocal_weight");
    const int nx = grid_.nx();
    const int ny = grid_.ny();
    std::vector<Complex> spec(kernel_hat_.size());
    if (mode_ == ConvolutionMode::Circular) {
        fft::forward(n0_, n1_, f.values(), spec);
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= kernel_hat_[k];
        Field out(grid_);
        fft::inverse(n0_, n1_, spec, out.values());
        return out;
    }
    std::vector<double> padded(static_cast<std::size_t>(n0_) * n1_, 0.0);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) padded[static_cast<std::size_t>(i) * n1_ + j] = f(i, j);
    }
    fft::forward(n0_, n1_, padded, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= kernel_hat_[k];
    fft::inverse(n0_, n1_, spec, padded);
    Field out(grid_);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) out(i, j) = padded[static_cast<std::size_t>(i) * n1_ + j];
    }
    return out;
}

Sandwich sandwich_check(const NonlocalOperator& op, const Field& u) {
    const Field usq = hadamard(u, u);
    const Field w = op.weight(usq);
    const double norm_sq = inner(u, u);
    const auto bounds = op.kernel().bounds();
    return {bounds.b * norm_sq * norm_sq, inner(usq, w), bounds.a * norm_sq * norm_sq};
}

}  // namespace nlsh
