#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "modunwrap/errors.hpp"

namespace modunwrap {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Modulo size. Coordinates are reduced to [-delta/2, delta/2).
struct ModParam {
    double delta;
    explicit ModParam(double d) : delta(d) {
        if (!(d > 0.0)) throw DataError("ModParam: delta must be positive");
    }
};

/// Reduce x to [-delta/2, delta/2). Exactly delta/2 wraps to -delta/2.
double mod_scalar(double x, ModParam delta);

/// A vector with every coordinate in [-delta/2, delta/2). The constructor
/// enforces the range.
struct WrappedVector {
    Eigen::VectorXd coords;
    ModParam delta;

    WrappedVector(Eigen::VectorXd c, ModParam d);
    int dim() const { return static_cast<int>(coords.size()); }
};

WrappedVector mod_vector(const Eigen::VectorXd& x, ModParam delta);

/// [A x*]* for an integer matrix A; equals [A x]* for any x with x* = xstar.
WrappedVector integer_image(const IntMatrix& A, const WrappedVector& xstar);

/// Columnwise reduction; the workhorse form used by the decoders.
Eigen::MatrixXd wrap_columns(const Eigen::MatrixXd& x, double delta);

/// n samples stored one per column, tagged with the modulo size.
struct SampleSet {
    Eigen::MatrixXd samples;  // K x n
    ModParam delta;

    int dim() const { return static_cast<int>(samples.rows()); }
    int size() const { return static_cast<int>(samples.cols()); }
};

// Throws DataError naming the first offending 1-based column.
void validate_wrapped(const SampleSet& set);

}  // namespace modunwrap
