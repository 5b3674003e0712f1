#pragma once

#include "nlsh/field.hpp"
#include "nlsh/kernel.hpp"

#include <memory>
#include <string_view>

namespace nlsh {

enum class ModelVariant { Nonlocal, LocalCubic };

std::string_view to_string(ModelVariant v);

/// Parameters of
///   u_t = mu u - (1 + lap)^2 u - N(u) = -alpha u - 2 lap u - lap^2 u - N(u),
/// with alpha = 1 - mu and N(u) = u (G * u^2) (nonlocal) or u^3 (local).
struct ModelParams {
    double mu = 0.4;
    ModelVariant variant = ModelVariant::Nonlocal;
    /// Kernel cache; required for the nonlocal variant.
    std::shared_ptr<const NonlocalOperator> nonlocal;
    /// When false, N(u) is dropped (linear test runs).
    bool nonlinearity = true;

    double alpha() const noexcept { return 1.0 - mu; }
};

ModelParams make_nonlocal(double mu, std::shared_ptr<const NonlocalOperator> op);
ModelParams make_local(double mu);

/// Both halves of du/dt: linear_part = -alpha u - 2 lap u - lap^2 u,
/// nonlinear_part = -N(u).
struct RhsBreakdown {
    Field linear_part;
    Field nonlinear_part;
};

/// -alpha u - 2 lap u - lap^2 u.
Field linear_part(const ModelParams& p, const Field& u);
/// N(u) as written on the left-hand side (so du/dt contains -N(u)).
Field nonlinear_term(const ModelParams& p, const Field& u);
RhsBreakdown rhs_breakdown(const ModelParams& p, const Field& u);
/// du/dt.
Field rhs(const ModelParams& p, const Field& u);

/// w = G * u^2 for the nonlocal variant, u^2 for the local one (so that
/// N(u) = u w in both cases).
Field potential(const ModelParams& p, const Field& u);

/// The nonlinear part of the tangent dynamics, -(L(u) v - linear part):
///   nonlocal: -(v w + 2 u (G * (u v))),  local: -3 u^2 v.
/// w must be potential(p, u).
Field tangent_nonlinear(const ModelParams& p, const Field& u, const Field& w, const Field& v);

/// -L(u) v, the tangent vector field of v_t + L(u) v = 0.
Field linearized_apply(const ModelParams& p, const Field& u, const Field& v);

}  // namespace nlsh
