#include "modunwrap/informed.hpp"

#include <cmath>

namespace modunwrap {

MinMaxForm min_max_quadratic_form(const CovMatrix& sigma, double lll_delta) {
    UnimodMatrix a = shortest_basis_surrogate(sigma.matrix(), lll_delta);
    const Eigen::MatrixXd ad = a.matrix().cast<double>();
    double value = 0.0;
    for (int k = 0; k < a.dim(); ++k) {
        const Eigen::VectorXd row = ad.row(k).transpose();
        value = std::max(value, row.dot(sigma.matrix() * row));
    }
    return MinMaxForm{value, std::move(a)};
}

double delta_for_target_error(const CovMatrix& sigma, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DataError("delta_for_target_error: eps must lie in (0, 1)");
    return 2.0 * std::sqrt(min_max_quadratic_form(sigma).value) * q_inv(0.5 * eps);
}

InformedDecoder::InformedDecoder(CovMatrix sigma, ModParam delta)
    : sigma_(std::move(sigma)),
      delta_(delta),
      if_matrix_(UnimodMatrix::identity(1)),
      if_inverse_(UnimodMatrix::identity(1)),
      sigma_k_(0.0) {
    MinMaxForm mm = min_max_quadratic_form(sigma_);
    sigma_k_ = std::sqrt(mm.value);
    if_matrix_ = std::move(mm.transform);
    if_inverse_ = if_matrix_.inverse();
    map_generator_ = delta_.delta * sigma_.inverse_sqrt();
}

Eigen::VectorXd InformedDecoder::map_unwrap(const WrappedVector& xstar) const {
    if (xstar.dim() != sigma_.dim()) throw DataError("map_unwrap: dimension mismatch");
    const Eigen::VectorXd target = -(sigma_.inverse_sqrt() * xstar.coords);
    IntVector b = closest_vector(map_generator_, target);
    return xstar.coords + delta_.delta * b.cast<double>();
}

Eigen::VectorXd InformedDecoder::if_unwrap(const WrappedVector& xstar) const {
    if (xstar.dim() != sigma_.dim()) throw DataError("if_unwrap: dimension mismatch");
    WrappedVector folded = integer_image(if_matrix_.matrix(), xstar);
    return if_inverse_.matrix().cast<double>() * folded.coords;
}

ErrorBounds InformedDecoder::if_error_bounds() const {
    const double q = q_func(delta_.delta / (2.0 * sigma_k_));
    return ErrorBounds{2.0 * q, 2.0 * sigma_.dim() * q};
}

double block_error_lower(double eps, long n) {
    if (!(eps >= 0.0 && eps < 1.0)) throw DataError("block_error_lower: eps must lie in [0, 1)");
    if (n < 0) throw DataError("block_error_lower: n must be nonnegative");
    return -std::expm1(static_cast<double>(n) * std::log1p(-eps));
}

AssumptionParams::AssumptionParams(double e, double t, double p, double rho)
    : eps(e), tau_min(t), P(p), rho_pack(rho) {
    if (!(eps > 0.0 && eps < 1.0)) throw DataError("AssumptionParams: eps out of (0, 1)");
    if (!(tau_min > 0.0)) throw DataError("AssumptionParams: tau_min must be positive");
    if (!(P > 0.0 && P < 1.0)) throw DataError("AssumptionParams: P out of (0, 1)");
    if (!(rho_pack > 0.0 && rho_pack < 1.0)) throw DataError("AssumptionParams: rho_pack out of (0, 1)");
}

AssumptionCheck check_assumptions(const CovMatrix& sigma, ModParam delta,
                                  const AssumptionParams& params, int n_mc,
                                  std::uint64_t seed) {
    AssumptionCheck out{};
    MinMaxForm mm = min_max_quadratic_form(sigma);
    const double sigma_k = std::sqrt(mm.value);
    const double q = q_func(delta.delta / (2.0 * sigma_k));
    out.if_upper_bound = 2.0 * sigma.dim() * q;
    out.a1_sufficient = out.if_upper_bound <= params.eps;
    out.a1_necessary = 2.0 * q <= params.eps;

    out.min_eigenvalue = sigma.min_eigenvalue();
    out.a2 = out.min_eigenvalue >= params.tau_min * params.tau_min;

    out.miss = miss_probability(sigma, delta, n_mc, seed);
    out.a3 = out.miss.value <= params.P + 2.0 * out.miss.std_error;

    Eigen::MatrixXd sqrt_sigma = sigma.eigenvectors() *
                                 sigma.eigenvalues().cwiseSqrt().asDiagonal() *
                                 sigma.eigenvectors().transpose();
    LatticeBasis basis(std::move(sqrt_sigma));
    out.packing_ratio = packing_radius(basis) / effective_radius(basis);
    out.a4 = out.packing_ratio >= params.rho_pack;
    return out;
}

}  // namespace modunwrap
