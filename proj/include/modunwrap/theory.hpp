#pragma once

#include "modunwrap/errors.hpp"

namespace modunwrap {

/// Rate exponent alpha^2 - 1 - ln(alpha^2) of the Gaussian norm tail bound
/// Pr(||Z|| >= r) <= exp(-K/2 * rate(r / sqrt(K))). Defined for alpha >= 1.
double norm_tail_rate(double alpha);

/// Parameters of the one-step miss-probability map. `contraction` is
/// 4K / Qinv(eps/2)^2 * (1 + beta)/(1 - beta), computed at construction.
struct DynamicsParams {
    int K;
    double eps;
    double beta;
    double P;
    double contraction;

    DynamicsParams(int k, double eps_, double beta_, double P_ = 0.0);
};

/// One step of the miss-probability upper bound: (c + p (1 - c))^2.
/// Requires contraction < 1/2.
double miss_dynamics_step(double p, const DynamicsParams& dp);

/// Unique fixed point (c / (1 - c))^2 of the step map on [0, 1).
double miss_dynamics_fixed_point(const DynamicsParams& dp);

/// Lower bound on the Gaussian measure of a convex symmetric set given the
/// measure p of its gamma-scaling: 1 - 2Q(Qinv((1-p)/2) / gamma). Always >= p.
double dilation_lower_bound(double p, double gamma);

struct TailCheck {
    double lhs;  // 2 Q(Qinv(p) / gamma)
    double rhs;  // (2p)^(1/gamma)
};

/// Both sides of the dilated-tail inequality lhs <= rhs, for p in (0, 1/2).
TailCheck tail_dilation_check(double p, double gamma);

/// ceil(ln 180 / ln(4 / (3 + P))) + 2 iterations suffice for the dynamics to
/// reach its small-miss regime from starting miss probability P.
int iteration_budget(double P);

/// Universal upper bound on delta / lambda_min(Sigma^{1/2}) implied by the
/// informed error bound, the miss bound, and the packing ratio.
double min_eigen_scale_bound(double eps, double P, double rho_pack, int K);

/// Upper bound on |Sigma|^{1/2K} given the informed error bound: scales
/// linearly in delta.
double det_root_bound(double eps, int K, double delta);

/// Miss probability achievable once covariance estimates are beta-accurate:
/// K * Q(0.99 sqrt((1-beta)/(1+beta)) * Qinv(eps/2)).
/// Requires Qinv(eps/2) >= 6 sqrt(K) and beta <= 0.1.
double converged_miss_bound(double eps, int K, double beta);

/// End-to-end blind block-error bound
/// 2n exp(-K/2 f(0.99 Qinv(eps/2)/sqrt(K))) + n exp(-K/2 f(Qinv(eps')/sqrt(K)))
/// with eps' = K Q(0.98 Qinv(eps/2)). Requires both rate arguments >= 1.
double blind_block_error_bound(double eps, int K, long n);

/// 2n exp(-K/2 f(0.99 Qinv(eps/2)/sqrt(K))): failure bound for recovering a
/// good transform alone.
double transform_recovery_failure_bound(double eps, int K, long n);

struct EstimationFailureBound {
    double false_positive;
    double many_escapees;
    double sample_est;
    double miss_cover;
    double total;
    double beta_bar;    // attainable accuracy: beta + 2K (delta/tau)^2 / (alpha sqrt(n))
    double n_required;  // C K log(K) / (2 alpha) * (delta/tau)^2 / beta^2
};

/// Failure-probability terms for the connected-component covariance
/// estimator. `delta_over_tau` = delta / tau_min and `det_root_over_tau` =
/// |Sigma|^{1/2K} / tau_min; the absolute constant C defaults to 1.
EstimationFailureBound estimation_failure_bound(long n, int K, double eps, double P,
                                                double eta, double beta,
                                                double delta_over_tau,
                                                double det_root_over_tau, double C = 1.0);

}  // namespace modunwrap
