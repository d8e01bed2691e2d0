#include "modunwrap/gauss.hpp"

#include <cmath>
#include <string>

namespace modunwrap {

double q_func(double t) {
    if (!std::isfinite(t)) throw DataError("q_func: non-finite argument");
    return 0.5 * std::erfc(t * M_SQRT1_2);
}

namespace {

// AS241 (Wichura): Phi^{-1}(p) to ~1 part in 1e16, valid into the far tails.
double norm_quantile(double p) {
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                     6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
                   1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
                 1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
               (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                     3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
                   5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
                 4.2313330701600911252e1) * r + 1.0);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double z;
    if (r <= 5.0) {
        r -= 1.6;
        z = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
    } else {
        r -= 5.0;
        z = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -z : z;
}

inline double norm_pdf(double t) {
    return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DataError("q_inv: argument must lie in (0, 1)");
    double t = -norm_quantile(p);
    for (int i = 0; i < 2; ++i) {
        const double f = q_func(t) - p;
        const double d = norm_pdf(t);
        if (d <= 0.0) break;
        const double step = f / d;
        if (!std::isfinite(step)) break;
        t += step;
    }
    return t;
}

namespace {

// Regularized lower incomplete gamma P(a, x): series for x < a+1, Lentz
// continued fraction otherwise.
double gamma_p(double a, double x) {
    if (x < 0.0) throw DataError("gamma_p: negative argument");
    if (x == 0.0) return 0.0;
    const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a;
        double sum = term;
        for (int n = 1; n < 1000; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-17) break;
        }
        return sum * std::exp(log_prefactor);
    }
    double b = x + 1.0 - a;
    double c = 1.0 / 1e-300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(log_prefactor) * h;
}

}  // namespace

double chi2_cdf(double x, int dof) {
    if (dof < 1) throw DataError("chi2_cdf: dof must be positive");
    if (x < 0.0) throw DataError("chi2_cdf: negative argument");
    return gamma_p(0.5 * dof, 0.5 * x);
}

double truncation_lower_constant(double P, int K) {
    if (!(P > 0.0 && P < 1.0)) throw DataError("truncation_lower_constant: P must lie in (0, 1)");
    if (K < 1) throw DataError("truncation_lower_constant: K must be positive");
    const double t = q_inv(0.5 * P);
    const double first = chi2_cdf(t * t, K + 2);
    const double second = 1.0 - std::sqrt(3.0 * P);
    return std::max(first, second);
}

CovMatrix::CovMatrix(Eigen::MatrixXd s) : s_(std::move(s)) {
    if (s_.rows() != s_.cols() || s_.rows() == 0)
        throw DataError("CovMatrix: matrix must be square and nonempty");
    const double scale = s_.cwiseAbs().maxCoeff();
    if ((s_ - s_.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(scale, 1e-300))
        throw DataError("CovMatrix: matrix is not symmetric");
    s_ = 0.5 * (s_ + s_.transpose().eval());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_);
    if (es.info() != Eigen::Success)
        throw AlgorithmError("CovMatrix: eigendecomposition failed");
    const int k = dim();
    // Descending eigenvalue order.
    eigenvalues_ = es.eigenvalues().reverse();
    eigenvectors_.resize(k, k);
    for (int i = 0; i < k; ++i) eigenvectors_.col(i) = es.eigenvectors().col(k - 1 - i);
    if (!(eigenvalues_(k - 1) > 0.0))
        throw DataError("CovMatrix: matrix is not positive definite");

    determinant_ = eigenvalues_.prod();
    inv_sqrt_ = eigenvectors_ * eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal() *
                eigenvectors_.transpose();

    Eigen::LLT<Eigen::MatrixXd> llt(s_);
    if (llt.info() != Eigen::Success)
        throw DataError("CovMatrix: Cholesky factorization failed");
    chol_lower_ = llt.matrixL();
}

Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_gaussian(cov, n, rng);
}

Eigen::MatrixXd sample_gaussian(const CovMatrix& cov, int n, Rng& rng) {
    if (n < 1) throw DataError("sample_gaussian: n must be positive");
    const int k = cov.dim();
    Eigen::MatrixXd z(k, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < k; ++i) z(i, j) = rng.next_normal();
    return cov.cholesky_lower() * z;
}

TruncatedCovEstimate truncated_cov_oracle_detailed(const CovMatrix& cov, ModParam delta,
                                                   int n_mc, std::uint64_t seed) {
    if (n_mc < 1) throw DataError("truncated_cov_oracle: n_mc must be positive");
    const int k = cov.dim();
    const double half = 0.5 * delta.delta;
    Rng rng(seed);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd x(k), z(k);
    int accepted = 0;
    for (int t = 0; t < n_mc; ++t) {
        for (int i = 0; i < k; ++i) z(i) = rng.next_normal();
        x = cov.cholesky_lower() * z;
        bool in_cube = true;
        for (int i = 0; i < k; ++i) {
            if (!(x(i) >= -half && x(i) < half)) { in_cube = false; break; }
        }
        if (!in_cube) continue;
        ++accepted;
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                const double v = x(i) * x(j);
                sum(i, j) += v;
                sum_sq(i, j) += v * v;
            }
        }
    }
    if (accepted < 100) throw AlgorithmError("truncated_cov_oracle: truncation region too unlikely");
    TruncatedCovEstimate out;
    out.accepted = accepted;
    out.second_moment = sum / accepted;
    out.entry_std_error.resize(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            const double mean = out.second_moment(i, j);
            const double var = std::max(0.0, sum_sq(i, j) / accepted - mean * mean);
            out.entry_std_error(i, j) = std::sqrt(var / accepted);
        }
    }
    return out;
}

Eigen::MatrixXd truncated_cov_oracle(const CovMatrix& cov, ModParam delta, int n_mc,
                                     std::uint64_t seed) {
    return truncated_cov_oracle_detailed(cov, delta, n_mc, seed).second_moment;
}

MonteCarloEstimate miss_probability(const CovMatrix& cov, ModParam delta, int n_mc,
                                    std::uint64_t seed) {
    if (n_mc < 10000) throw DataError("miss_probability: n_mc must be at least 10^4");
    const int k = cov.dim();
    const double half = 0.5 * delta.delta;
    Rng rng(seed);
    Eigen::VectorXd x(k), z(k);
    long misses = 0;
    for (int t = 0; t < n_mc; ++t) {
        for (int i = 0; i < k; ++i) z(i) = rng.next_normal();
        x = cov.cholesky_lower() * z;
        for (int i = 0; i < k; ++i) {
            if (!(x(i) >= -half && x(i) < half)) { ++misses; break; }
        }
    }
    const double p = static_cast<double>(misses) / n_mc;
    return MonteCarloEstimate{p, std::sqrt(p * (1.0 - p) / n_mc)};
}

}  // namespace modunwrap
