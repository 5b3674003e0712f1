#pragma once

namespace nlsh::theory {

// Closed-form quantities of the a-priori analysis. The dimension estimates
// carry an unspecified domain constant C; we fix the convention
// m = C (1 + sqrt(...)), so only ratios and orderings between the bounds are
// meaningful.

struct Inputs {
    double mu = 0.4;
    double a = 1.0;  ///< sup G
    double b = 1.0;  ///< inf G
    double C = 1.0;
};

/// Throws InvalidArgument unless mu > 0, a >= b > 0 and C > 0.
void validate(const Inputs& in);

/// (2a - b) mu / b, the extra nonlocal contribution under the radical.
double nonlocal_excess(const Inputs& in);

struct NonlocalBound {
    double m_est;    ///< C (1 + sqrt(mu + (2a - b) mu / b))
    double eps_opt;  ///< 1 + sqrt(mu + (2a - b) mu / b)
};
NonlocalBound bound_nonlocal(const Inputs& in);

/// Threshold sqrt((mu - 1 + eps + (2a - b) mu / b) C / (1 - 1/eps)) above
/// which the trace is positive, for eps > 1.
double threshold_nonlocal(const Inputs& in, double eps);

/// C (1 + sqrt(mu)); mu >= 0.
double bound_local(double mu, double C = 1.0);
/// sqrt((mu - 1 + eps) C / (1 - 1/eps)), eps > 1.
double threshold_local(double mu, double C, double eps);
double eps_opt_local(double mu);

/// C (1 + sqrt(2 mu)), the constant-kernel (a = b) case of bound_nonlocal.
double bound_constant_kernel(double mu, double C = 1.0);

/// bound_nonlocal - bound_local.
double gap(const Inputs& in);

/// sqrt(mu / b).
double absorbing_radius(double mu, double b);

/// First Dirichlet eigenvalue of -lap on [0,lx] x [0,ly].
double poincare_lambda1(double lx, double ly);

}  // namespace nlsh::theory
