#include "modunwrap/theory.hpp"

#include <cmath>
#include <string>

#include "modunwrap/gauss.hpp"
#include "modunwrap/lattice.hpp"

namespace modunwrap {

double norm_tail_rate(double alpha) {
    if (!(alpha >= 1.0))
        throw AlgorithmError("norm_tail_rate: argument below 1 is outside the tail regime");
    return alpha * alpha - 1.0 - std::log(alpha * alpha);
}

DynamicsParams::DynamicsParams(int k, double eps_, double beta_, double P_)
    : K(k), eps(eps_), beta(beta_), P(P_) {
    if (k < 1) throw DataError("DynamicsParams: K must be positive");
    if (!(eps_ > 0.0 && eps_ < 1.0)) throw DataError("DynamicsParams: eps must lie in (0, 1)");
    if (!(beta_ >= 0.0 && beta_ <= 0.1)) throw DataError("DynamicsParams: beta must lie in [0, 0.1]");
    if (!(P_ >= 0.0 && P_ < 1.0)) throw DataError("DynamicsParams: P must lie in [0, 1)");
    const double t = q_inv(0.5 * eps_);
    contraction = 4.0 * k / (t * t) * (1.0 + beta_) / (1.0 - beta_);
}

double miss_dynamics_step(double p, const DynamicsParams& dp) {
    if (!(dp.contraction < 0.5))
        throw AlgorithmError("miss_dynamics_step: requires contraction < 1/2");
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("miss_dynamics_step: p must lie in [0, 1]");
    const double c = dp.contraction;
    const double v = c + p * (1.0 - c);
    return v * v;
}

double miss_dynamics_fixed_point(const DynamicsParams& dp) {
    if (!(dp.contraction < 0.5))
        throw AlgorithmError("miss_dynamics_fixed_point: requires contraction < 1/2");
    const double r = dp.contraction / (1.0 - dp.contraction);
    return r * r;
}

double dilation_lower_bound(double p, double gamma) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("dilation_lower_bound: p must lie in [0, 1]");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DataError("dilation_lower_bound: gamma must lie in (0, 1)");
    if (p == 1.0) return 1.0;
    return 1.0 - 2.0 * q_func(q_inv(0.5 * (1.0 - p)) / gamma);
}

TailCheck tail_dilation_check(double p, double gamma) {
    if (!(p > 0.0 && p < 0.5)) throw DataError("tail_dilation_check: p must lie in (0, 1/2)");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DataError("tail_dilation_check: gamma must lie in (0, 1)");
    return TailCheck{2.0 * q_func(q_inv(p) / gamma), std::pow(2.0 * p, 1.0 / gamma)};
}

int iteration_budget(double P) {
    if (!(P >= 0.0 && P < 1.0)) throw DataError("iteration_budget: P must lie in [0, 1)");
    const double m = std::log(180.0) / std::log(4.0 / (3.0 + P));
    return static_cast<int>(std::ceil(m)) + 2;
}

double min_eigen_scale_bound(double eps, double P, double rho_pack, int K) {
    if (K < 1) throw DataError("min_eigen_scale_bound: K must be positive");
    if (!(eps > 0.0 && eps < 1.0) || !(P > 0.0 && P < 1.0) ||
        !(rho_pack > 0.0 && rho_pack < 1.0))
        throw DataError("min_eigen_scale_bound: arguments out of range");
    const double num = std::pow(static_cast<double>(K), 2.0 * K - 0.5) * unit_ball_volume(K) *
                       std::pow(q_inv(eps / (2.0 * K)), K);
    const double den = std::pow(2.0, K) * std::pow(rho_pack, K) *
                       std::pow(q_inv(0.5 * P), K - 1);
    return num / den;
}

double det_root_bound(double eps, int K, double delta) {
    if (K < 1) throw DataError("det_root_bound: K must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw DataError("det_root_bound: eps must lie in (0, 1)");
    if (!(delta > 0.0)) throw DataError("det_root_bound: delta must be positive");
    return delta / (std::pow(unit_ball_volume(K), 1.0 / K) * q_inv(0.5 * eps));
}

double converged_miss_bound(double eps, int K, double beta) {
    if (K < 1) throw DataError("converged_miss_bound: K must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw DataError("converged_miss_bound: eps must lie in (0, 1)");
    const double t = q_inv(0.5 * eps);
    // Slack of a few ulps keeps boundary eps (where equality holds) accepted.
    if (!(t >= 6.0 * std::sqrt(static_cast<double>(K)) * (1.0 - 1e-12)))
        throw AlgorithmError("converged_miss_bound: requires Qinv(eps/2) >= 6 sqrt(K)");
    if (!(beta >= 0.0 && beta <= 0.1))
        throw AlgorithmError("converged_miss_bound: requires beta <= 0.1");
    return K * q_func(0.99 * std::sqrt((1.0 - beta) / (1.0 + beta)) * t);
}

double transform_recovery_failure_bound(double eps, int K, long n) {
    if (K < 1 || n < 1) throw DataError("transform_recovery_failure_bound: bad K or n");
    if (!(eps > 0.0 && eps < 1.0))
        throw DataError("transform_recovery_failure_bound: eps must lie in (0, 1)");
    const double arg = 0.99 * q_inv(0.5 * eps) / std::sqrt(static_cast<double>(K));
    if (!(arg >= 1.0))
        throw AlgorithmError("transform_recovery_failure_bound: rate argument below 1");
    return 2.0 * n * std::exp(-0.5 * K * norm_tail_rate(arg));
}

double blind_block_error_bound(double eps, int K, long n) {
    if (K < 1 || n < 1) throw DataError("blind_block_error_bound: bad K or n");
    if (!(eps > 0.0 && eps < 1.0))
        throw DataError("blind_block_error_bound: eps must lie in (0, 1)");
    const double sqrt_k = std::sqrt(static_cast<double>(K));
    const double a1 = 0.99 * q_inv(0.5 * eps) / sqrt_k;
    const double eps_prime = K * q_func(0.98 * q_inv(0.5 * eps));
    if (!(eps_prime > 0.0 && eps_prime < 1.0))
        throw AlgorithmError("blind_block_error_bound: derived error rate out of (0, 1)");
    const double a2 = q_inv(eps_prime) / sqrt_k;
    if (!(a1 >= 1.0 && a2 >= 1.0))
        throw AlgorithmError("blind_block_error_bound: rate argument below 1");
    return 2.0 * n * std::exp(-0.5 * K * norm_tail_rate(a1)) +
           static_cast<double>(n) * std::exp(-0.5 * K * norm_tail_rate(a2));
}

EstimationFailureBound estimation_failure_bound(long n, int K, double eps, double P,
                                                double eta, double beta,
                                                double delta_over_tau,
                                                double det_root_over_tau, double C) {
    if (n < 1 || K < 1) throw DataError("estimation_failure_bound: bad n or K");
    if (!(eps > 0.0 && eps < 1.0) || !(P > 0.0 && P < 1.0))
        throw DataError("estimation_failure_bound: eps and P must lie in (0, 1)");
    if (!(beta > 0.0) || !(delta_over_tau > 0.0) || !(det_root_over_tau > 0.0) || !(C > 0.0))
        throw DataError("estimation_failure_bound: scale arguments must be positive");
    const double sqrt_k = std::sqrt(static_cast<double>(K));
    const double kappa = q_inv(0.5 * eps) / sqrt_k;
    if (!(kappa > 1.0))
        throw AlgorithmError("estimation_failure_bound: requires Qinv(eps/2) > sqrt(K)");
    if (!(eta > 0.0 && eta < 1.0 - 1.0 / kappa))
        throw AlgorithmError("estimation_failure_bound: requires eta in (0, 1 - 1/kappa)");

    const double alpha = truncation_lower_constant(P, K);
    const double ratio_sq = delta_over_tau * delta_over_tau;

    EstimationFailureBound out{};
    out.beta_bar = beta + 2.0 * K * ratio_sq / (alpha * std::sqrt(static_cast<double>(n)));
    out.n_required = C * K * std::log(static_cast<double>(K)) / (2.0 * alpha) * ratio_sq /
                     (beta * beta);

    out.false_positive = n * std::exp(-0.5 * K * norm_tail_rate((1.0 - eta) * kappa));
    out.many_escapees = std::exp(-(3.0 / 14.0) * std::sqrt(static_cast<double>(n)));
    out.sample_est = std::exp(-beta * beta * alpha / (C * 0.5 * K * ratio_sq) * n) +
                     std::exp(-0.5 * (1.0 - P) * (1.0 - P) * n);
    const double log_n = std::log(static_cast<double>(n));
    const double cover_gain =
        std::pow((kappa * eta / det_root_over_tau) /
                     (std::sqrt(0.5 * M_PI) * (2.0 * delta_over_tau + 4.0)),
                 K) *
        std::exp(0.5 * log_n - std::sqrt(0.5 * K * log_n) - 0.5 * K);
    const double cover_entropy =
        K * std::log(sqrt_k + 2.0 * delta_over_tau / (kappa * eta));
    out.miss_cover = std::exp(-cover_gain + cover_entropy);

    out.total = out.false_positive + out.many_escapees + out.sample_est + out.miss_cover;
    return out;
}

}  // namespace modunwrap
