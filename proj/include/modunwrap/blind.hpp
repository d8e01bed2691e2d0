#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "modunwrap/gauss.hpp"
#include "modunwrap/lattice.hpp"

namespace modunwrap {

enum class BlindMode { naive, partitioned };

struct BlindConfig {
    double d;                       // connectivity distance for the threshold graph
    int max_iterations = 30;        // M
    BlindMode mode = BlindMode::naive;
    double d_growth = 1.1;
    int min_component = 0;          // 0 -> K + 1 (graph component size incl. the origin)
    double lll_delta = 0.99;
    bool stop_on_identity = true;   // stop once the step transform is a signed permutation
    bool include_zero = true;       // count the synthetic origin in the moment average
};

struct TruncCovEstimate {
    Eigen::MatrixXd second_moment;
    std::vector<int> component;  // sample indices d-connected to the origin
    double d_final;
};

/// Connected-component estimate of the truncated second moment: a synthetic
/// origin point joins the n wrapped samples, points within distance d are
/// adjacent, and the origin's component is averaged. d grows by `d_growth`
/// until the component reaches `min_size` members (origin included); growth
/// is capped once d exceeds sqrt(K) * delta / 2, where everything connects.
TruncCovEstimate estimate_truncated_cov(const Eigen::MatrixXd& wrapped, double delta,
                                        double d, double d_growth, int min_size,
                                        bool include_zero = true);

struct IterationRecord {
    IntMatrix step_transform;   // the A-tilde applied at this iteration
    int component_size;         // graph component size incl. origin (0 for injected estimators)
    double d_used;
    Eigen::MatrixXd est_cov;
    int est_begin;              // sample range fed to the estimator
    int est_end;
};

struct BlindResult {
    UnimodMatrix transform;      // accumulated A (ordered product of the steps)
    Eigen::MatrixXd estimates;   // K x n, column j = A^{-1} V*_j(final)
    int iterations_run;
    std::vector<IterationRecord> iterations;
};

struct EstimateInfo {
    Eigen::MatrixXd cov;
    int component_size = 0;
    double d_used = 0.0;
};

/// Covariance estimator seam: receives the current (possibly partitioned)
/// wrapped block, the accumulated transform, and the iteration index.
using CovEstimator =
    std::function<EstimateInfo(const Eigen::MatrixXd& vstar, const UnimodMatrix& accum, int iter)>;

/// Iterative blind unwrapping: per iteration, estimate the truncated second
/// moment, LLL a basis for it, fold the samples through the step transform,
/// and accumulate. Deterministic for fixed input.
BlindResult blind_unwrap(const SampleSet& samples, const BlindConfig& cfg);

/// Same engine with an injected covariance estimator.
BlindResult blind_unwrap(const SampleSet& samples, const BlindConfig& cfg,
                         const CovEstimator& estimator);

struct BruteForceResult {
    IntMatrix transform;        // K chosen rows, |det| >= 1
    bool unimodular;
    Eigen::MatrixXd estimates;  // K x n
    std::vector<IntVector> short_list;  // accepted directions, shortest first
};

/// List-decoding alternative: score every integer direction a with
/// ||a|| <= (sigma_det_root / tau_min)^{K/2} by the empirical wrapped second
/// moment V_a, keep sqrt(V_a) < gamma, and build the transform greedily from
/// the shortest independent survivors.
BruteForceResult brute_force_unwrap(const SampleSet& samples, double sigma_det_root,
                                    double gamma, double tau_min);

}  // namespace modunwrap
