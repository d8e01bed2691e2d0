#include "modunwrap/unimod.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <vector>

namespace modunwrap {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigMatrix = std::vector<std::vector<BigInt>>;

BigMatrix to_big(const IntMatrix& m) {
    BigMatrix out(m.rows(), std::vector<BigInt>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

std::int64_t narrow(const BigInt& v, const char* what) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min())
        throw AlgorithmError(std::string(what) + ": entry overflows int64 storage");
    return static_cast<std::int64_t>(v);
}

// Bareiss fraction-free elimination; returns the exact determinant and, via
// `rank_out`, the rank. Divisions are exact at every step.
BigInt bareiss(BigMatrix a, int* rank_out) {
    const int n = static_cast<int>(a.size());
    if (n == 0) {
        if (rank_out) *rank_out = 0;
        return 1;
    }
    const int m = static_cast<int>(a[0].size());
    BigInt prev = 1;
    int sign = 1;
    int row = 0;
    for (int col = 0; col < m && row < n; ++col) {
        int pivot = -1;
        for (int r = row; r < n; ++r) {
            if (a[r][col] != 0) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        if (pivot != row) {
            std::swap(a[pivot], a[row]);
            sign = -sign;
        }
        for (int r = row + 1; r < n; ++r) {
            for (int c = col + 1; c < m; ++c) {
                a[r][c] = (a[row][col] * a[r][c] - a[r][col] * a[row][c]) / prev;
            }
            a[r][col] = 0;
        }
        prev = a[row][col];
        ++row;
    }
    if (rank_out) *rank_out = row;
    if (n != m || row < n) return 0;
    return sign * prev;
}

// Adjugate via cofactor expansion; exact. Sizes here are tiny (K <= 12).
BigMatrix big_adjugate(const BigMatrix& a) {
    const int n = static_cast<int>(a.size());
    BigMatrix adj(n, std::vector<BigInt>(n));
    if (n == 1) {
        adj[0][0] = 1;
        return adj;
    }
    BigMatrix minor(n - 1, std::vector<BigInt>(n - 1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int mr = 0;
            for (int r = 0; r < n; ++r) {
                if (r == i) continue;
                int mc = 0;
                for (int c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[mr][mc] = a[r][c];
                    ++mc;
                }
                ++mr;
            }
            BigInt det = bareiss(minor, nullptr);
            adj[j][i] = (((i + j) & 1) == 0) ? det : -det;
        }
    }
    return adj;
}

}  // namespace

UnimodMatrix::UnimodMatrix(IntMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
        throw DataError("UnimodMatrix: matrix must be square and nonempty");
    BigInt det = bareiss(to_big(entries_), nullptr);
    if (det != 1 && det != -1)
        throw DataError("UnimodMatrix: determinant is not +-1");
    det_sign_ = (det == 1) ? 1 : -1;
}

UnimodMatrix UnimodMatrix::identity(int k) {
    return UnimodMatrix(IntMatrix::Identity(k, k));
}

UnimodMatrix UnimodMatrix::inverse() const {
    const int n = dim();
    BigMatrix adj = big_adjugate(to_big(entries_));
    IntMatrix inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv(i, j) = narrow(det_sign_ == 1 ? adj[i][j] : -adj[i][j],
                               "UnimodMatrix::inverse");
    return UnimodMatrix(std::move(inv));
}

UnimodMatrix UnimodMatrix::operator*(const UnimodMatrix& rhs) const {
    if (dim() != rhs.dim())
        throw DataError("UnimodMatrix: dimension mismatch in product");
    const int n = dim();
    IntMatrix out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            BigInt acc = 0;
            for (int k = 0; k < n; ++k)
                acc += BigInt(entries_(i, k)) * BigInt(rhs.entries_(k, j));
            out(i, j) = narrow(acc, "UnimodMatrix::operator*");
        }
    }
    return UnimodMatrix(std::move(out));
}

std::int64_t exact_determinant(const IntMatrix& m) {
    if (m.rows() != m.cols())
        throw DataError("exact_determinant: matrix must be square");
    return narrow(bareiss(to_big(m), nullptr), "exact_determinant");
}

int exact_rank(const IntMatrix& m) {
    int rank = 0;
    bareiss(to_big(m), &rank);
    return rank;
}

bool is_signed_permutation(const IntMatrix& m) {
    if (m.rows() != m.cols()) return false;
    const int n = static_cast<int>(m.rows());
    std::vector<int> col_count(n, 0);
    for (int i = 0; i < n; ++i) {
        int row_count = 0;
        for (int j = 0; j < n; ++j) {
            if (m(i, j) == 0) continue;
            if (m(i, j) != 1 && m(i, j) != -1) return false;
            ++row_count;
            ++col_count[j];
        }
        if (row_count != 1) return false;
    }
    for (int j = 0; j < n; ++j)
        if (col_count[j] != 1) return false;
    return true;
}

}  // namespace modunwrap
