#include "nlsh/dynamics.hpp"

#include "nlsh/error.hpp"
#include "nlsh/operators.hpp"

namespace nlsh {
namespace {

void check_params(const ModelParams& p, const Field& u) {
    if (p.variant == ModelVariant::Nonlocal && p.nonlinearity) {
        if (!p.nonlocal) throw InvalidArgument("nonlocal model requires a kernel cache");
        if (!(p.nonlocal->grid() == u.grid())) {
            throw InvalidArgument("kernel cache was built for a different grid");
        }
    }
}

}  // namespace

std::string_view to_string(ModelVariant v) {
    return v == ModelVariant::Nonlocal ? "nonlocal" : "local";
}

ModelParams make_nonlocal(double mu, std::shared_ptr<const NonlocalOperator> op) {
    if (!op) throw InvalidArgument("make_nonlocal: null kernel cache");
    ModelParams p;
    p.mu = mu;
    p.variant = ModelVariant::Nonlocal;
    p.nonlocal = std::move(op);
    return p;
}

ModelParams make_local(double mu) {
    ModelParams p;
    p.mu = mu;
    p.variant = ModelVariant::LocalCubic;
    return p;
}

Field linear_part(const ModelParams& p, const Field& u) {
    Field out = biharmonic(u);
    out *= -1.0;
    out.axpy(-2.0, laplacian(u));
    out.axpy(-p.alpha(), u);
    return out;
}

Field potential(const ModelParams& p, const Field& u) {
    check_params(p, u);
    if (p.variant == ModelVariant::LocalCubic) return hadamard(u, u);
    return p.nonlocal->weight(hadamard(u, u));
}

Field nonlinear_term(const ModelParams& p, const Field& u) {
    if (!p.nonlinearity) return Field(u.grid());
    Field out = hadamard(u, potential(p, u));
    require_finite(out, "nonlinear term");
    return out;
}

RhsBreakdown rhs_breakdown(const ModelParams& p, const Field& u) {
    Field nl = nonlinear_term(p, u);
    nl *= -1.0;
    return {linear_part(p, u), std::move(nl)};
}

Field rhs(const ModelParams& p, const Field& u) {
    auto parts = rhs_breakdown(p, u);
    parts.linear_part += parts.nonlinear_part;
    require_finite(parts.linear_part, "rhs");
    return std::move(parts.linear_part);
}

Field tangent_nonlinear(const ModelParams& p, const Field& u, const Field& w, const Field& v) {
    if (!p.nonlinearity) return Field(v.grid());
    check_params(p, u);
    require_same_grid(u, v, "tangent_nonlinear");
    Field out(v.grid());
    if (p.variant == ModelVariant::LocalCubic) {
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = -3.0 * w[k] * v[k];
        return out;
    }
    const Field coupling = p.nonlocal->weight_signed(hadamard(u, v));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = -(v[k] * w[k] + 2.0 * u[k] * coupling[k]);
    return out;
}

Field linearized_apply(const ModelParams& p, const Field& u, const Field& v) {
    require_same_grid(u, v, "linearized_apply");
    Field out = linear_part(p, v);
    if (p.nonlinearity) out += tangent_nonlinear(p, u, potential(p, u), v);
    require_finite(out, "linearized_apply");
    return out;
}

}  // namespace nlsh
