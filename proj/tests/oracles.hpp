// Independent reference implementations used only to check the library.
// Everything here recomputes results from first principles (extended
// precision, exhaustive search, quadrature) without touching the code paths
// under test.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "modunwrap/rng.hpp"

namespace oracles {

// Extended-precision reduction x - delta * round(x/delta), half rounded up.
inline double mod_reference(double x, double delta) {
    const long double xl = x;
    const long double dl = delta;
    const long double b = floorl(xl / dl + 0.5L);
    long double r = xl - dl * b;
    if (r < -0.5L * dl) r += dl;
    if (r >= 0.5L * dl) r -= dl;
    return static_cast<double>(r);
}

// High-precision upper-tail normal probability.
inline double q_reference(double t) {
    return static_cast<double>(0.5L * erfcl(static_cast<long double>(t) * 0.7071067811865475244L));
}

// Exhaustive shortest nonzero vector of the lattice {G b} over |b_i| <= bound.
inline double svp_reference(const Eigen::MatrixXd& g, int bound) {
    const int k = static_cast<int>(g.cols());
    Eigen::VectorXd b(k);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(k, -bound);
    while (true) {
        for (int i = 0; i < k; ++i) b(i) = idx[i];
        if (b.cwiseAbs().sum() != 0) best = std::min(best, (g * b).squaredNorm());
        int level = k - 1;
        while (level >= 0 && idx[level] == bound) idx[level--] = -bound;
        if (level < 0) break;
        ++idx[level];
    }
    return std::sqrt(best);
}

// Exhaustive closest-point search: minimizes ||G b - target|| over |b_i| <= bound.
inline Eigen::VectorXi cvp_reference(const Eigen::MatrixXd& g, const Eigen::VectorXd& target,
                                     int bound, double* objective = nullptr) {
    const int k = static_cast<int>(g.cols());
    Eigen::VectorXd b(k);
    Eigen::VectorXi best_b = Eigen::VectorXi::Zero(k);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> idx(k, -bound);
    while (true) {
        for (int i = 0; i < k; ++i) b(i) = idx[i];
        const double v = (g * b - target).squaredNorm();
        if (v < best) {
            best = v;
            for (int i = 0; i < k; ++i) best_b(i) = idx[i];
        }
        int level = k - 1;
        while (level >= 0 && idx[level] == bound) idx[level--] = -bound;
        if (level < 0) break;
        ++idx[level];
    }
    if (objective) *objective = best;
    return best_b;
}

// Exact minimum over unimodular integer matrices (entries in [-bound, bound])
// of the max-row quadratic form, by scanning candidate rows in ascending
// form order until some K-subset has determinant +-1. K <= 3.
inline double sbp_reference(const Eigen::MatrixXd& s, int bound) {
    const int k = static_cast<int>(s.rows());
    struct Row {
        std::int64_t a[3];
        double form;
    };
    std::vector<Row> rows;
    std::vector<std::int64_t> v(k, -bound);
    Eigen::VectorXd vd(k);
    while (true) {
        bool zero = true;
        int lead = -1;
        for (int i = 0; i < k; ++i) {
            if (v[i] != 0) {
                if (lead < 0) lead = i;
                zero = false;
            }
        }
        if (!zero && v[lead] > 0) {  // canonical half; negation preserves everything
            Row r{};
            for (int i = 0; i < k; ++i) {
                r.a[i] = v[i];
                vd(i) = static_cast<double>(v[i]);
            }
            r.form = vd.dot(s * vd);
            rows.push_back(r);
        }
        int level = k - 1;
        while (level >= 0 && v[level] == bound) v[level--] = -bound;
        if (level < 0) break;
        ++v[level];
    }
    std::sort(rows.begin(), rows.end(), [](const Row& x, const Row& y) { return x.form < y.form; });

    auto det2 = [](const Row& a, const Row& b) { return a.a[0] * b.a[1] - a.a[1] * b.a[0]; };
    auto det3 = [](const Row& a, const Row& b, const Row& c) {
        return a.a[0] * (b.a[1] * c.a[2] - b.a[2] * c.a[1]) -
               a.a[1] * (b.a[0] * c.a[2] - b.a[2] * c.a[0]) +
               a.a[2] * (b.a[0] * c.a[1] - b.a[1] * c.a[0]);
    };

    for (size_t m = 0; m < rows.size(); ++m) {
        if (k == 1) {
            if (std::llabs(rows[m].a[0]) == 1) return rows[m].form;
        } else if (k == 2) {
            for (size_t i = 0; i < m; ++i)
                if (std::llabs(det2(rows[i], rows[m])) == 1) return rows[m].form;
            if (m == 0) continue;
        } else {
            for (size_t i = 0; i < m; ++i)
                for (size_t j = i + 1; j < m; ++j)
                    if (std::llabs(det3(rows[i], rows[j], rows[m])) == 1) return rows[m].form;
        }
    }
    return std::numeric_limits<double>::infinity();
}

// Simpson quadrature for E[X^2 | |X| < h], X ~ N(0, sigma^2).
inline double truncated_second_moment_1d(double sigma, double h, int panels = 20000) {
    auto pdf = [sigma](double x) {
        return std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
    };
    const double step = 2.0 * h / panels;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= panels; ++i) {
        const double x = -h + i * step;
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        num += w * x * x * pdf(x);
        den += w * pdf(x);
    }
    return num / den;
}

// Connected component of the origin in the threshold graph over
// {0, columns...}, via breadth-first search on an explicit adjacency list.
inline std::vector<int> component_reference(const Eigen::MatrixXd& points, double d) {
    const int n = static_cast<int>(points.cols());
    const double d_sq = d * d;
    std::vector<std::vector<int>> adj(n + 1);
    for (int j = 0; j < n; ++j) {
        if (points.col(j).squaredNorm() < d_sq) {
            adj[0].push_back(j + 1);
            adj[j + 1].push_back(0);
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if ((points.col(a) - points.col(b)).squaredNorm() < d_sq) {
                adj[a + 1].push_back(b + 1);
                adj[b + 1].push_back(a + 1);
            }
    std::vector<bool> seen(n + 1, false);
    std::vector<int> queue{0}, members;
    seen[0] = true;
    while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        if (v > 0) members.push_back(v - 1);
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    std::sort(members.begin(), members.end());
    return members;
}

// Random SPD matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(int k, double lo, double hi, modunwrap::Rng& rng) {
    Eigen::MatrixXd a(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = rng.next_normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(k);
    for (int i = 0; i < k; ++i) ev(i) = lo + (hi - lo) * rng.next_double();
    return q * ev.asDiagonal() * q.transpose();
}

}  // namespace oracles
