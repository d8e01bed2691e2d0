#include "modunwrap/blind.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace modunwrap {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Lexicographic column comparison for order-canonical summation.
bool col_less(const Eigen::MatrixXd& m, int a, int b) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, a) < m(i, b)) return true;
        if (m(i, a) > m(i, b)) return false;
    }
    return false;
}

}  // namespace

TruncCovEstimate estimate_truncated_cov(const Eigen::MatrixXd& wrapped, double delta,
                                        double d, double d_growth, int min_size,
                                        bool include_zero) {
    if (wrapped.cols() < 1) throw DataError("estimate_truncated_cov: need at least one sample");
    if (!(d > 0.0)) throw DataError("estimate_truncated_cov: d must be positive");
    if (!(d_growth > 1.0)) throw DataError("estimate_truncated_cov: d_growth must exceed 1");
    if (!(delta > 0.0)) throw DataError("estimate_truncated_cov: delta must be positive");

    const int n = static_cast<int>(wrapped.cols());
    const int k = static_cast<int>(wrapped.rows());
    // Everything in the cube lies within sqrt(K) * delta / 2 of the origin.
    const double d_cap = std::sqrt(static_cast<double>(k)) * delta * 0.5;

    std::vector<int> component;
    double d_cur = d;
    while (true) {
        const double d_sq = d_cur * d_cur;
        UnionFind uf(n + 1);  // vertex 0 is the synthetic origin
        for (int j = 0; j < n; ++j) {
            if (wrapped.col(j).squaredNorm() < d_sq) uf.unite(0, j + 1);
        }
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                if ((wrapped.col(a) - wrapped.col(b)).squaredNorm() < d_sq) uf.unite(a + 1, b + 1);
            }
        }
        component.clear();
        const int root = uf.find(0);
        for (int j = 0; j < n; ++j) {
            if (uf.find(j + 1) == root) component.push_back(j);
        }
        if (static_cast<int>(component.size()) + 1 >= min_size) break;
        if (d_cur > d_cap) break;  // complete graph already; nothing more can join
        d_cur *= d_growth;
    }

    // Canonical summation order makes the estimate invariant to sample order.
    std::vector<int> order = component;
    std::sort(order.begin(), order.end(),
              [&wrapped](int a, int b) { return col_less(wrapped, a, b); });
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(k, k);
    for (int idx : order) sum += wrapped.col(idx) * wrapped.col(idx).transpose();
    const int denom = static_cast<int>(component.size()) + (include_zero ? 1 : 0);
    if (denom == 0) throw AlgorithmError("estimate_truncated_cov: empty component average");
    return TruncCovEstimate{sum / denom, std::move(component), d_cur};
}

BlindResult blind_unwrap(const SampleSet& samples, const BlindConfig& cfg) {
    const int k = samples.dim();
    const double delta = samples.delta.delta;
    const int min_size = cfg.min_component > 0 ? cfg.min_component : k + 1;
    CovEstimator default_estimator = [&cfg, delta, min_size](const Eigen::MatrixXd& vstar,
                                                             const UnimodMatrix&, int) {
        TruncCovEstimate est = estimate_truncated_cov(vstar, delta, cfg.d, cfg.d_growth,
                                                      min_size, cfg.include_zero);
        return EstimateInfo{std::move(est.second_moment),
                            static_cast<int>(est.component.size()) + 1, est.d_final};
    };
    return blind_unwrap(samples, cfg, default_estimator);
}

BlindResult blind_unwrap(const SampleSet& samples, const BlindConfig& cfg,
                         const CovEstimator& estimator) {
    const int k = samples.dim();
    const int n = samples.size();
    if (n < 1) throw DataError("blind_unwrap: empty sample set");
    if (cfg.max_iterations < 1) throw DataError("blind_unwrap: max_iterations must be positive");
    validate_wrapped(samples);

    int block = n;
    if (cfg.mode == BlindMode::partitioned) {
        if (n < cfg.max_iterations * (k + 1))
            throw DataError("blind_unwrap: partitioned mode needs n >= M * (K + 1)");
        block = n / cfg.max_iterations;
    }

    Eigen::MatrixXd vstar = samples.samples;
    UnimodMatrix accum = UnimodMatrix::identity(k);
    std::vector<IterationRecord> records;
    int ctr = 0;
    while (ctr < cfg.max_iterations) {
        const int begin = (cfg.mode == BlindMode::partitioned) ? ctr * block : 0;
        const int count = (cfg.mode == BlindMode::partitioned) ? block : n;
        EstimateInfo info = estimator(vstar.middleCols(begin, count), accum, ctr);

        Eigen::MatrixXd cov = 0.5 * (info.cov + info.cov.transpose().eval());
        {
            // Generic samples keep this full rank; a degenerate component can
            // momentarily break positive definiteness, so nudge and go on.
            Eigen::LLT<Eigen::MatrixXd> probe(cov);
            if (probe.info() != Eigen::Success) {
                const double ridge = std::max(1e-12, 1e-10 * cov.trace() / k);
                cov += ridge * Eigen::MatrixXd::Identity(k, k);
            }
        }
        UnimodMatrix step = shortest_basis_surrogate(cov, cfg.lll_delta);

        vstar = wrap_columns(step.matrix().cast<double>() * vstar, samples.delta.delta);
        accum = step * accum;
        ++ctr;
        records.push_back(IterationRecord{step.matrix(), info.component_size, info.d_used,
                                          std::move(info.cov), begin, begin + count});
        if (cfg.stop_on_identity && is_signed_permutation(step.matrix())) break;
    }

    UnimodMatrix inv = accum.inverse();
    BlindResult out{std::move(accum), inv.matrix().cast<double>() * vstar, ctr,
                    std::move(records)};
    return out;
}

BruteForceResult brute_force_unwrap(const SampleSet& samples, double sigma_det_root,
                                    double gamma, double tau_min) {
    const int k = samples.dim();
    const int n = samples.size();
    if (n < 1) throw DataError("brute_force_unwrap: empty sample set");
    if (k > 6)
        throw AlgorithmError("brute_force_unwrap: direction enumeration unsupported above K = 6");
    if (!(tau_min > 0.0) || !(sigma_det_root > 0.0))
        throw DataError("brute_force_unwrap: scale parameters must be positive");
    const double delta = samples.delta.delta;
    if (!(gamma > 0.0 && gamma < 0.5 * delta))
        throw DataError("brute_force_unwrap: gamma must lie in (0, delta/2)");
    validate_wrapped(samples);

    const double radius = std::pow(sigma_det_root / tau_min, 0.5 * k);
    const long bound = static_cast<long>(std::floor(radius));
    double count_est = 1.0;
    for (int i = 0; i < k; ++i) count_est *= 2.0 * radius + 1.0;
    if (count_est > 5e7)
        throw AlgorithmError("brute_force_unwrap: direction ball too large to enumerate");

    ModParam p(delta);
    struct Scored {
        IntVector a;
        double norm_sq;
    };
    std::vector<Scored> survivors;

    IntVector a(k);
    const double gamma_sq = gamma * gamma;
    // Canonical half of the ball: first nonzero coordinate positive.
    std::function<void(int, double)> visit = [&](int level, double norm_sq) {
        if (level == k) {
            if (norm_sq == 0.0) return;
            int lead = 0;
            while (lead < k && a(lead) == 0) ++lead;
            if (a(lead) < 0) return;
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                double dot = 0.0;
                for (int i = 0; i < k; ++i)
                    dot += static_cast<double>(a(i)) * samples.samples(i, j);
                const double w = mod_scalar(dot, p);
                acc += w * w;
            }
            if (acc / n < gamma_sq) survivors.push_back(Scored{a, norm_sq});
            return;
        }
        for (long v = -bound; v <= bound; ++v) {
            const double ns = norm_sq + static_cast<double>(v) * static_cast<double>(v);
            if (ns > radius * radius) continue;
            a(level) = v;
            visit(level + 1, ns);
        }
    };
    visit(0, 0.0);

    std::sort(survivors.begin(), survivors.end(), [k](const Scored& x, const Scored& y) {
        if (x.norm_sq != y.norm_sq) return x.norm_sq < y.norm_sq;
        for (int i = 0; i < k; ++i) {
            if (x.a(i) != y.a(i)) return x.a(i) < y.a(i);
        }
        return false;
    });

    // Greedy independent selection, exact rank over the integers.
    IntMatrix chosen(0, k);
    std::vector<IntVector> list;
    for (const Scored& s : survivors) {
        list.push_back(s.a);
        if (chosen.rows() == k) continue;
        IntMatrix trial(chosen.rows() + 1, k);
        trial.topRows(chosen.rows()) = chosen;
        trial.row(chosen.rows()) = s.a.transpose();
        if (exact_rank(trial) == trial.rows()) chosen = std::move(trial);
    }
    if (chosen.rows() < k)
        throw AlgorithmError("brute_force_unwrap: insufficient short directions found");

    const std::int64_t det = exact_determinant(chosen);
    BruteForceResult out;
    out.transform = chosen;
    out.unimodular = (det == 1 || det == -1);
    out.short_list = std::move(list);

    // X-hat = A^{-1} [A X*]*; the inverse need not be integer, so solve in
    // doubles on the exactly known integer transform.
    Eigen::MatrixXd folded = wrap_columns(chosen.cast<double>() * samples.samples, delta);
    out.estimates = chosen.cast<double>().partialPivLu().solve(folded);
    return out;
}

}  // namespace modunwrap
