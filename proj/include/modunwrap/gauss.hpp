#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "modunwrap/modarith.hpp"
#include "modunwrap/rng.hpp"

namespace modunwrap {

/// Upper-tail standard normal probability Q(t); relative error stays below
/// 1e-12 down to outputs around 1e-300.
double q_func(double t);

/// Inverse of q_func on (0, 1): rational approximation (AS241-style) polished
/// by two Newton steps on q_func, accurate deep into the tails.
double q_inv(double p);

/// CDF of a chi-squared variable with `dof` degrees of freedom
/// (regularized lower incomplete gamma).
double chi2_cdf(double x, int dof);

/// max[ F_{chi2(K+2)}((Qinv(P/2))^2), 1 - sqrt(3P) ]: the constant relating a
/// symmetric-convex truncation's second moment to the full covariance.
/// The raw value is returned; it can be <= 0 for large P.
double truncation_lower_constant(double P, int K);

/// Symmetric positive-definite covariance with eagerly cached factorizations.
/// Immutable after construction; safe for concurrent reads.
class CovMatrix {
public:
    explicit CovMatrix(Eigen::MatrixXd s);

    int dim() const { return static_cast<int>(s_.rows()); }
    const Eigen::MatrixXd& matrix() const { return s_; }
    const Eigen::MatrixXd& cholesky_lower() const { return chol_lower_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }  // descending
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
    const Eigen::MatrixXd& inverse_sqrt() const { return inv_sqrt_; }
    double determinant() const { return determinant_; }
    double min_eigenvalue() const { return eigenvalues_(dim() - 1); }

private:
    Eigen::MatrixXd s_;
    Eigen::MatrixXd chol_lower_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::MatrixXd inv_sqrt_;
    double determinant_;
};

/// n zero-mean Gaussian samples (one per column), deterministic in the seed.
Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int n, std::uint64_t seed);
Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int n, Rng& rng);

struct MonteCarloEstimate {
    double value;
    double std_error;
};

struct TruncatedCovEstimate {
    Eigen::MatrixXd second_moment;
    Eigen::MatrixXd entry_std_error;
    int accepted;
};

/// Rejection-sampling estimate of E[X X^T | X in [-delta/2, delta/2)^K].
/// Test oracle: generality over speed. Throws AlgorithmError if fewer than
/// 100 of the n_mc draws land in the cube.
Eigen::MatrixXd truncated_cov_oracle(const CovMatrix& cov, ModParam delta, int n_mc,
                                     std::uint64_t seed);
TruncatedCovEstimate truncated_cov_oracle_detailed(const CovMatrix& cov, ModParam delta,
                                                   int n_mc, std::uint64_t seed);

/// Monte-Carlo estimate of Pr(X not in [-delta/2, delta/2)^K).
MonteCarloEstimate miss_probability(const CovMatrix& cov, ModParam delta, int n_mc,
                                    std::uint64_t seed);

}  // namespace modunwrap
