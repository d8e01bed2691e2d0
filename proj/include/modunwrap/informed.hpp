#pragma once

#include <Eigen/Dense>

#include "modunwrap/gauss.hpp"
#include "modunwrap/lattice.hpp"

namespace modunwrap {

struct MinMaxForm {
    double value;  // max-row quadratic form max_k a_k^T S a_k of `transform`
    UnimodMatrix transform;
};

/// LLL surrogate for min over unimodular A of max_k a_k^T S a_k; `value` is
/// the quadratic form achieved by the returned rows.
MinMaxForm min_max_quadratic_form(const CovMatrix& sigma, double lll_delta = 0.99);

/// Modulo size that pins the integer-forcing error lower bound to eps:
/// delta = 2 * sqrt(min-max form) * Qinv(eps/2).
double delta_for_target_error(const CovMatrix& sigma, double eps);

struct ErrorBounds {
    double lower;  // 2 Q(delta / (2 sigma_k))
    double upper;  // 2K Q(delta / (2 sigma_k))
};

/// Benchmark decoders with access to the covariance. Immutable after
/// construction; decode calls may run concurrently.
class InformedDecoder {
public:
    InformedDecoder(CovMatrix sigma, ModParam delta);

    /// Exact maximum-likelihood unwrap: x* + delta * b with b the closest
    /// point in the lattice generated by delta * Sigma^{-1/2}.
    Eigen::VectorXd map_unwrap(const WrappedVector& xstar) const;

    /// Integer forcing: A^{-1} [A x*]* with the cached unimodular A.
    Eigen::VectorXd if_unwrap(const WrappedVector& xstar) const;

    ErrorBounds if_error_bounds() const;

    double sigma_k() const { return sigma_k_; }
    const UnimodMatrix& if_matrix() const { return if_matrix_; }
    const CovMatrix& sigma() const { return sigma_; }
    double delta() const { return delta_.delta; }

private:
    CovMatrix sigma_;
    ModParam delta_;
    UnimodMatrix if_matrix_;
    UnimodMatrix if_inverse_;
    double sigma_k_;
    Eigen::MatrixXd map_generator_;  // delta * Sigma^{-1/2}
};

/// 1 - (1 - eps)^n, computed stably. For eps = 2e-5, n = 1000 this
/// evaluates to about 0.0198.
double block_error_lower(double eps, long n);

struct AssumptionParams {
    double eps;       // target informed error bound
    double tau_min;   // noise-floor scale: lambda_K(Sigma) >= tau_min^2
    double P;         // cube-miss probability bound
    double rho_pack;  // packing ratio r0 / r_eff
    AssumptionParams(double e, double t, double p, double rho);
};

struct AssumptionCheck {
    bool a1_sufficient;  // 2K Q(delta/(2 sigma_k)) <= eps
    bool a1_necessary;   // 2  Q(delta/(2 sigma_k)) <= eps
    bool a2;             // lambda_K >= tau_min^2
    bool a3;             // MC miss probability <= P (within 2 SE)
    bool a4;             // packing ratio of Sigma^{1/2} lattice >= rho_pack
    double if_upper_bound;
    double min_eigenvalue;
    MonteCarloEstimate miss;
    double packing_ratio;
};

AssumptionCheck check_assumptions(const CovMatrix& sigma, ModParam delta,
                                  const AssumptionParams& params, int n_mc,
                                  std::uint64_t seed);

}  // namespace modunwrap
