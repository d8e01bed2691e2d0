#include "modunwrap/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace modunwrap {

namespace {

constexpr long kMaxLLLSwaps = 10'000'000;

void check_full_rank(const Eigen::MatrixXd& g, const char* what) {
    if (g.rows() != g.cols() || g.rows() == 0)
        throw DataError(std::string(what) + ": generator must be square and nonempty");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) > 1e12)
        throw AlgorithmError(std::string(what) + ": generator is rank deficient");
}

// Gram-Schmidt data for the current basis columns.
struct Gso {
    Eigen::MatrixXd mu;        // unit lower triangular coefficients
    Eigen::VectorXd norms_sq;  // squared norms of the orthogonalized columns
};

Gso compute_gso(const Eigen::MatrixXd& b) {
    const int k = static_cast<int>(b.cols());
    Eigen::MatrixXd bstar = b;
    Gso g{Eigen::MatrixXd::Identity(k, k), Eigen::VectorXd::Zero(k)};
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v = b.col(i);
        for (int j = 0; j < i; ++j) {
            g.mu(i, j) = b.col(i).dot(bstar.col(j)) / g.norms_sq(j);
            v -= g.mu(i, j) * bstar.col(j);
        }
        bstar.col(i) = v;
        g.norms_sq(i) = v.squaredNorm();
    }
    return g;
}

}  // namespace

LLLResult lll_reduce(const Eigen::MatrixXd& generator, double lll_delta) {
    if (!(lll_delta > 0.25 && lll_delta < 1.0))
        throw DataError("lll_reduce: lll_delta must lie in (1/4, 1)");
    check_full_rank(generator, "lll_reduce");

    const int k = static_cast<int>(generator.cols());
    Eigen::MatrixXd b = generator;
    IntMatrix u = IntMatrix::Identity(k, k);

    // Subtracting q * b_j changes mu(i, j') for j' <= j; the row copy tracks
    // that so later quotients stay correct.
    auto size_reduce_col = [&](int i, const Gso& g) {
        Eigen::VectorXd mu_row = g.mu.row(i).head(i);
        for (int j = i - 1; j >= 0; --j) {
            if (std::abs(mu_row(j)) <= 0.5) continue;
            const double q = std::round(mu_row(j));
            if (std::abs(q) > 0x1p40)
                throw AlgorithmError("lll_reduce: size-reduction quotient overflow");
            const auto qi = static_cast<std::int64_t>(q);
            b.col(i) -= q * b.col(j);
            u.col(i) -= qi * u.col(j);
            for (int j2 = 0; j2 < j; ++j2) mu_row(j2) -= q * g.mu(j, j2);
            mu_row(j) -= q;
        }
    };

    long swaps = 0;
    int i = 1;
    Gso g = compute_gso(b);
    while (i < k) {
        size_reduce_col(i, g);
        g = compute_gso(b);
        const double lhs = g.norms_sq(i);
        const double rhs = (lll_delta - g.mu(i, i - 1) * g.mu(i, i - 1)) * g.norms_sq(i - 1);
        if (lhs >= rhs) {
            ++i;
        } else {
            b.col(i).swap(b.col(i - 1));
            u.col(i).swap(u.col(i - 1));
            g = compute_gso(b);
            i = std::max(i - 1, 1);
            if (++swaps > kMaxLLLSwaps)
                throw AlgorithmError("lll_reduce: swap budget exhausted");
        }
    }
    // Final size-reduction pass over all columns.
    g = compute_gso(b);
    for (int c = 1; c < k; ++c) {
        size_reduce_col(c, g);
        g = compute_gso(b);
    }
    return LLLResult{std::move(b), UnimodMatrix(std::move(u))};
}

namespace {

// Depth-first Schnorr-Euchner enumeration on an upper-triangular R.
// Minimizes ||R z - y|| over integer z; `exclude_zero` turns it into a
// shortest-vector search. Candidates at each level are visited closest to
// the real-valued center first, so the first leaf is the Babai point.
struct Enumerator {
    const Eigen::MatrixXd& r;
    const Eigen::VectorXd& y;
    bool exclude_zero;
    int k;
    Eigen::VectorXi z, best_z;
    double best;

    Enumerator(const Eigen::MatrixXd& rr, const Eigen::VectorXd& yy, bool excl,
               double init_best, Eigen::VectorXi init_z)
        : r(rr), y(yy), exclude_zero(excl), k(static_cast<int>(rr.cols())),
          z(Eigen::VectorXi::Zero(rr.cols())), best_z(std::move(init_z)), best(init_best) {}

    void run() { descend(k - 1, 0.0); }

    // Candidates at each level scan outward from the rounded center, upward
    // first then downward; per-side terms grow monotonically, so each side
    // stops at the first budget violation.
    void descend(int level, double partial) {
        double shift = y(level);
        for (int j = level + 1; j < k; ++j) shift -= r(level, j) * z(j);
        const double c = shift / r(level, level);
        const double r2 = r(level, level) * r(level, level);
        const double base = std::floor(c + 0.5);
        for (int side = 0; side < 2; ++side) {
            for (long t = (side == 0 ? 0 : 1);; ++t) {
                const double cand = (side == 0) ? base + static_cast<double>(t)
                                                : base - static_cast<double>(t);
                const double diff = cand - c;
                const double term = r2 * diff * diff;
                if (partial + term >= best) break;
                z(level) = static_cast<int>(std::lround(cand));
                if (level == 0) {
                    if (!(exclude_zero && z.isZero())) {
                        best = partial + term;
                        best_z = z;
                    }
                } else {
                    descend(level - 1, partial + term);
                }
            }
        }
    }
};

}  // namespace

ShortestVector shortest_vector(const Eigen::MatrixXd& generator) {
    if (generator.rows() > kMaxEnumerationDim)
        throw AlgorithmError("shortest_vector: exact enumeration unsupported at this dimension");
    LLLResult lll = lll_reduce(generator);
    const int k = static_cast<int>(generator.cols());

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lll.reduced);
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < k; ++i)
        if (r(i, i) < 0) r.row(i) = -r.row(i);

    int best_col = 0;
    double best = lll.reduced.col(0).squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double n = lll.reduced.col(c).squaredNorm();
        if (n < best) { best = n; best_col = c; }
    }
    Eigen::VectorXi init = Eigen::VectorXi::Zero(k);
    init(best_col) = 1;

    Enumerator en(r, Eigen::VectorXd::Zero(k), /*exclude_zero=*/true, best * (1.0 + 1e-12), init);
    en.run();

    IntVector b(k);
    for (int i = 0; i < k; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < k; ++j)
            acc += lll.transform.matrix()(i, j) * static_cast<std::int64_t>(en.best_z(j));
        b(i) = acc;
    }
    const double norm = (generator * b.cast<double>()).norm();
    return ShortestVector{std::move(b), norm};
}

IntVector closest_vector(const Eigen::MatrixXd& generator, const Eigen::VectorXd& target) {
    if (generator.rows() > kMaxEnumerationDim)
        throw AlgorithmError("closest_vector: exact enumeration unsupported at this dimension");
    if (target.size() != generator.rows())
        throw DataError("closest_vector: target dimension mismatch");
    LLLResult lll = lll_reduce(generator);
    const int k = static_cast<int>(generator.cols());

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lll.reduced);
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(k, k);
    for (int i = 0; i < k; ++i) {
        if (r(i, i) < 0) {
            r.row(i) = -r.row(i);
            q.col(i) = -q.col(i);
        }
    }
    const Eigen::VectorXd y = q.transpose() * target;

    Enumerator en(r, y, /*exclude_zero=*/false, std::numeric_limits<double>::infinity(),
                  Eigen::VectorXi::Zero(k));
    en.run();

    IntVector b(k);
    for (int i = 0; i < k; ++i) {
        std::int64_t acc = 0;
        for (int j = 0; j < k; ++j)
            acc += lll.transform.matrix()(i, j) * static_cast<std::int64_t>(en.best_z(j));
        b(i) = acc;
    }
    return b;
}

LatticeBasis::LatticeBasis(Eigen::MatrixXd generator) : generator_(std::move(generator)) {
    check_full_rank(generator_, "LatticeBasis");
    const int k = static_cast<int>(generator_.rows());
    packing_radius_ = 0.5 * shortest_vector(generator_).norm;
    const double logdet = std::log(std::abs(generator_.determinant()));
    effective_radius_ = std::exp((logdet - std::log(unit_ball_volume(k))) / k);
}

double packing_radius(const LatticeBasis& basis) { return basis.packing_radius_cached(); }

double effective_radius(const LatticeBasis& basis) { return basis.effective_radius_cached(); }

double unit_ball_volume(int k) {
    if (k < 1) throw DataError("unit_ball_volume: dimension must be positive");
    return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

UnimodMatrix shortest_basis_surrogate(const Eigen::MatrixXd& spd, double lll_delta) {
    if (spd.rows() != spd.cols() || spd.rows() == 0)
        throw DataError("shortest_basis_surrogate: matrix must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(spd);
    if (llt.info() != Eigen::Success)
        throw AlgorithmError("shortest_basis_surrogate: matrix is not positive definite");
    // a^T S a = ||L^T a||^2, so short rows a_k are short vectors of the
    // lattice generated by L^T; LLL's transform columns are those a_k.
    const Eigen::MatrixXd lt = Eigen::MatrixXd(llt.matrixL()).transpose();
    LLLResult lll = lll_reduce(lt, lll_delta);
    return UnimodMatrix(lll.transform.matrix().transpose());
}

}  // namespace modunwrap
