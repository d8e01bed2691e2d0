#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "modunwrap/modarith.hpp"

namespace modunwrap {

/// Integer matrix with determinant exactly +1 or -1.
///
/// The determinant and inverse are computed in exact arbitrary-width integer
/// arithmetic (Bareiss elimination / adjugate); the stored entries are int64
/// and any result that does not fit raises AlgorithmError.
class UnimodMatrix {
public:
    explicit UnimodMatrix(IntMatrix entries);

    static UnimodMatrix identity(int k);

    const IntMatrix& matrix() const { return entries_; }
    int det_sign() const { return det_sign_; }
    int dim() const { return static_cast<int>(entries_.rows()); }

    // Exact integer inverse (adjugate over the +-1 determinant).
    UnimodMatrix inverse() const;

    // Exact integer product; both operands unimodular, so the result is too.
    UnimodMatrix operator*(const UnimodMatrix& rhs) const;

private:
    IntMatrix entries_;
    int det_sign_;
};

/// Exact determinant of an arbitrary int64 matrix (Bareiss over wide ints).
/// Throws AlgorithmError if the value does not fit in int64.
std::int64_t exact_determinant(const IntMatrix& m);

/// Rank of an integer matrix computed exactly (fraction-free elimination).
int exact_rank(const IntMatrix& m);

/// True when every row and column has exactly one nonzero entry, equal to +-1.
bool is_signed_permutation(const IntMatrix& m);

}  // namespace modunwrap
