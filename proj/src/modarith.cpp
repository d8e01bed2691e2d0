#include "modunwrap/modarith.hpp"

#include <cmath>
#include <string>

namespace modunwrap {

namespace {

inline double mod_raw(double x, double delta) {
    // Quotient rounds half up so that x = delta/2 lands on -delta/2,
    // keeping the half-open range.
    const double b = std::floor(x / delta + 0.5);
    double r = std::fma(-delta, b, x);
    // Rounding in x/delta can leave r one step outside the range; fold back.
    if (r < -0.5 * delta) r += delta;
    if (r >= 0.5 * delta) r -= delta;
    return r;
}

}  // namespace

double mod_scalar(double x, ModParam delta) {
    if (!std::isfinite(x)) throw DataError("mod_scalar: non-finite input");
    return mod_raw(x, delta.delta);
}

WrappedVector::WrappedVector(Eigen::VectorXd c, ModParam d) : coords(std::move(c)), delta(d) {
    if (coords.size() == 0) throw DataError("WrappedVector: empty vector");
    const double half = 0.5 * delta.delta;
    for (Eigen::Index i = 0; i < coords.size(); ++i) {
        if (!(coords[i] >= -half && coords[i] < half))
            throw DataError("WrappedVector: coordinate " + std::to_string(i + 1) +
                            " outside [-delta/2, delta/2)");
    }
}

WrappedVector mod_vector(const Eigen::VectorXd& x, ModParam delta) {
    if (x.size() == 0) throw DataError("mod_vector: empty vector");
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = mod_scalar(x[i], delta);
    return WrappedVector(std::move(out), delta);
}

WrappedVector integer_image(const IntMatrix& A, const WrappedVector& xstar) {
    if (A.cols() != xstar.coords.size())
        throw DataError("integer_image: dimension mismatch");
    Eigen::VectorXd y = A.cast<double>() * xstar.coords;
    return mod_vector(y, xstar.delta);
}

Eigen::MatrixXd wrap_columns(const Eigen::MatrixXd& x, double delta) {
    if (!(delta > 0.0)) throw DataError("wrap_columns: delta must be positive");
    return x.unaryExpr([delta](double v) { return mod_raw(v, delta); });
}

void validate_wrapped(const SampleSet& set) {
    const double half = 0.5 * set.delta.delta;
    for (int j = 0; j < set.size(); ++j) {
        for (int i = 0; i < set.dim(); ++i) {
            const double v = set.samples(i, j);
            if (!(v >= -half && v < half))
                throw DataError("sample " + std::to_string(j + 1) +
                                " coordinate " + std::to_string(i + 1) +
                                " outside [-delta/2, delta/2)");
        }
    }
}

}  // namespace modunwrap
