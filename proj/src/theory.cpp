#include "nlsh/theory.hpp"

#include "nlsh/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nlsh::theory {

void validate(const Inputs& in) {
    if (!(in.mu > 0.0)) throw InvalidArgument("theory: mu must be positive");
    if (!(in.b > 0.0)) throw InvalidArgument("theory: b must be positive");
    if (!(in.a >= in.b)) throw InvalidArgument("theory: need a >= b");
    if (!(in.C > 0.0) || !std::isfinite(in.C)) throw InvalidArgument("theory: C must be finite and positive");
}

double nonlocal_excess(const Inputs& in) {
    validate(in);
    return (2.0 * in.a - in.b) * in.mu / in.b;
}

NonlocalBound bound_nonlocal(const Inputs& in) {
    const double root = std::sqrt(in.mu + nonlocal_excess(in));
    return {in.C * (1.0 + root), 1.0 + root};
}

double threshold_nonlocal(const Inputs& in, double eps) {
    if (!(eps > 1.0)) throw InvalidArgument("theory: eps must exceed 1");
    const double num = in.mu - 1.0 + eps + nonlocal_excess(in);
    return std::sqrt(num * in.C / (1.0 - 1.0 / eps));
}

double bound_local(double mu, double C) {
    if (!(mu >= 0.0)) throw InvalidArgument("theory: mu must be nonnegative");
    return C * (1.0 + std::sqrt(mu));
}

double threshold_local(double mu, double C, double eps) {
    if (!(eps > 1.0)) throw InvalidArgument("theory: eps must exceed 1");
    return std::sqrt((mu - 1.0 + eps) * C / (1.0 - 1.0 / eps));
}

double eps_opt_local(double mu) { return 1.0 + std::sqrt(mu); }

double bound_constant_kernel(double mu, double C) {
    return bound_nonlocal({mu, 1.0, 1.0, C}).m_est;
}

double gap(const Inputs& in) { return bound_nonlocal(in).m_est - bound_local(in.mu, in.C); }

double absorbing_radius(double mu, double b) {
    if (!(mu > 0.0) || !(b > 0.0)) throw InvalidArgument("absorbing_radius: mu and b must be positive");
    return std::sqrt(mu / b);
}

double poincare_lambda1(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0)) throw InvalidArgument("poincare_lambda1: extents must be positive");
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return pi2 * (1.0 / (lx * lx) + 1.0 / (ly * ly));
}

}  // namespace nlsh::theory
