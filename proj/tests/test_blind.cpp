#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "modunwrap/blind.hpp"
#include "modunwrap/harness.hpp"
#include "modunwrap/informed.hpp"
#include "oracles.hpp"

using namespace modunwrap;

namespace {

SampleSet wrap_set(const Eigen::MatrixXd& truth, double delta) {
    return SampleSet{wrap_columns(truth, delta), ModParam(delta)};
}

}  // namespace

TEST_CASE("component estimation: dense ball") {
    Rng rng(1);
    const int n = 60;
    Eigen::MatrixXd pts(2, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 2; ++i) pts(i, j) = 0.05 * rng.next_normal();
    TruncCovEstimate est = estimate_truncated_cov(pts, 10.0, 1.0, 1.1, 3);
    CHECK(static_cast<int>(est.component.size()) == n);
    Eigen::MatrixXd expect = (pts * pts.transpose()) / (n + 1);  // origin included
    CHECK((est.second_moment - expect).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(est.d_final == 1.0);
}

TEST_CASE("component estimation: far cluster stays out") {
    Rng rng(2);
    const int n = 40;
    Eigen::MatrixXd pts(2, n);
    for (int j = 0; j < n; ++j) {
        const bool near = j < 25;
        for (int i = 0; i < 2; ++i)
            pts(i, j) = (near ? 0.0 : 10.0) + 0.1 * rng.next_normal();
    }
    const double d = 1.0;
    TruncCovEstimate est = estimate_truncated_cov(pts, 100.0, d, 1.1, 3);
    std::vector<int> expect = oracles::component_reference(pts, d);
    CHECK(est.component == expect);
    CHECK(est.component.size() == 25);
    for (int idx : est.component) CHECK(idx < 25);
}

TEST_CASE("component estimation: growth until the component fills") {
    Eigen::MatrixXd pts(2, 1);
    pts << 2.0, 0.0;  // distance 2d0 from the origin
    const double d0 = 1.0;
    TruncCovEstimate est = estimate_truncated_cov(pts, 100.0, d0, 1.1, 2);
    CHECK(est.component.size() == 1);
    // 1.1^8 is the first power exceeding 2.
    CHECK(est.d_final == doctest::Approx(d0 * std::pow(1.1, 8)).epsilon(1e-12));
}

TEST_CASE("component estimation: permutation invariance and zero handling") {
    Rng rng(3);
    const int n = 80;
    Eigen::MatrixXd pts(3, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 3; ++i) pts(i, j) = rng.next_normal();

    TruncCovEstimate a = estimate_truncated_cov(pts, 20.0, 1.5, 1.1, 4);

    // Reverse the sample order: same component set, bit-identical estimate.
    Eigen::MatrixXd rev(3, n);
    for (int j = 0; j < n; ++j) rev.col(j) = pts.col(n - 1 - j);
    TruncCovEstimate b = estimate_truncated_cov(rev, 20.0, 1.5, 1.1, 4);
    CHECK(a.component.size() == b.component.size());
    std::vector<int> mapped;
    for (int idx : b.component) mapped.push_back(n - 1 - idx);
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == a.component);
    CHECK(a.second_moment == b.second_moment);

    // Excluding the synthetic origin only changes the denominator.
    TruncCovEstimate c = estimate_truncated_cov(pts, 20.0, 1.5, 1.1, 4, false);
    const double m = static_cast<double>(a.component.size());
    CHECK((c.second_moment * m - a.second_moment * (m + 1.0)).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("blind unwrap: white concentrated input stops immediately") {
    Rng rng(5);
    const int n = 200;
    Eigen::MatrixXd truth(2, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 2; ++i) truth(i, j) = 0.1 * rng.next_normal();
    SampleSet s = wrap_set(truth, 1.0);
    BlindConfig cfg;
    cfg.d = 0.5;
    BlindResult res = blind_unwrap(s, cfg);
    CHECK(res.iterations_run == 1);
    CHECK(is_signed_permutation(res.iterations[0].step_transform));
    CHECK((res.estimates - truth).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("blind unwrap: output identity [A xhat]* = folded state") {
    Rng rng(6);
    CovMatrix sigma = make_cov(2, 1, 100.0, rng);
    const double delta = delta_for_target_error(sigma, 1e-5);
    Eigen::MatrixXd truth = sample_gaussian(sigma, 500, rng);
    SampleSet s = wrap_set(truth, delta);
    BlindConfig cfg;
    cfg.d = 0.5 * std::sqrt(2.0) * q_inv(0.5e-5);
    BlindResult res = blind_unwrap(s, cfg);

    CHECK(std::abs(exact_determinant(res.transform.matrix())) == 1);
    // A is the ordered product of the per-iteration steps.
    UnimodMatrix prod = UnimodMatrix::identity(2);
    for (const IterationRecord& r : res.iterations)
        prod = UnimodMatrix(r.step_transform) * prod;
    CHECK(prod.matrix() == res.transform.matrix());

    // Per-sample congruence with the inputs; differences of exactly delta
    // (a wrap-boundary flip) are congruent to zero.
    Eigen::MatrixXd refold =
        wrap_columns(res.transform.matrix().cast<double>() * res.estimates, delta);
    Eigen::MatrixXd folded_state =
        wrap_columns(res.transform.matrix().cast<double>() * s.samples, delta);
    double worst = 0.0;
    for (int j = 0; j < refold.cols(); ++j)
        for (int i = 0; i < refold.rows(); ++i) {
            const double e = std::abs(refold(i, j) - folded_state(i, j));
            worst = std::max(worst, std::min(e, delta - e));
        }
    CHECK(worst <= 1e-6 * delta);
}

TEST_CASE("blind unwrap: spiky 2-D recovery rate") {
    const int trials = 50;
    int exact = 0;
    Rng base(1234);
    for (int t = 0; t < trials; ++t) {
        Rng rng = base.substream(t);
        CovMatrix sigma = make_cov(2, 1, 100.0, rng);
        const double delta = delta_for_target_error(sigma, 1e-5);
        Eigen::MatrixXd truth = sample_gaussian(sigma, 1000, rng);
        SampleSet s = wrap_set(truth, delta);
        BlindConfig cfg;
        cfg.d = 0.5 * std::sqrt(2.0) * q_inv(0.5e-5);
        BlindResult res = blind_unwrap(s, cfg);
        if ((res.estimates - truth).cwiseAbs().maxCoeff() <= 1e-6 * delta) ++exact;
    }
    CHECK(exact >= 45);  // expected ~ 49/50
}

// The state is always explainable from the raw inputs, and the component
// members are genuinely unwrapped points.
TEST_CASE("blind unwrap: instrumented invariants across iterations") {
    Rng base(777);
    long members = 0, violations = 0, consistency_checks = 0;
    std::vector<std::vector<double>> miss_rates;  // per trial, per iteration
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        Rng rng = base.substream(t);
        CovMatrix sigma = make_cov(2, 1, 100.0, rng);
        const double delta = delta_for_target_error(sigma, 1e-5);
        const int n = 1000;
        Eigen::MatrixXd truth = sample_gaussian(sigma, n, rng);
        SampleSet s = wrap_set(truth, delta);
        const double d0 = 0.5 * std::sqrt(2.0) * q_inv(0.5e-5);

        miss_rates.emplace_back();
        auto& rates = miss_rates.back();
        CovEstimator instrumented = [&](const Eigen::MatrixXd& vstar, const UnimodMatrix& accum,
                                        int) {
            const Eigen::MatrixXd a = accum.matrix().cast<double>();
            // Folded state matches folding the raw inputs through A, up to
            // congruence at wrap boundaries.
            Eigen::MatrixXd expect = wrap_columns(a * s.samples, delta);
            double worst = 0.0;
            for (int j = 0; j < expect.cols(); ++j)
                for (int i = 0; i < expect.rows(); ++i) {
                    const double e = std::abs(expect(i, j) - vstar(i, j));
                    worst = std::max(worst, std::min(e, delta - e));
                }
            if (worst <= 1e-6 * delta) ++consistency_checks;

            // Miss rate of the current transform against ground truth.
            Eigen::MatrixXd v_true = a * truth;
            int misses = 0;
            for (int j = 0; j < n; ++j) {
                bool in_cube = true;
                for (int i = 0; i < 2; ++i)
                    if (!(v_true(i, j) >= -0.5 * delta && v_true(i, j) < 0.5 * delta))
                        in_cube = false;
                if (!in_cube) ++misses;
            }
            rates.push_back(static_cast<double>(misses) / n);

            TruncCovEstimate est = estimate_truncated_cov(vstar, delta, d0, 1.1, 3);
            for (int idx : est.component) {
                ++members;
                bool in_cube = true;
                for (int i = 0; i < 2; ++i)
                    if (!(v_true(i, idx) >= -0.5 * delta && v_true(i, idx) < 0.5 * delta))
                        in_cube = false;
                if (!in_cube) ++violations;
            }
            return EstimateInfo{est.second_moment, static_cast<int>(est.component.size()) + 1,
                                est.d_final};
        };

        BlindConfig cfg;
        cfg.d = d0;
        cfg.max_iterations = 8;
        cfg.stop_on_identity = false;  // uniform-length iteration traces
        blind_unwrap(s, cfg, instrumented);
    }
    CHECK(members >= 10000);
    CHECK(static_cast<double>(violations) / members < 1e-3);
    CHECK(consistency_checks == trials * 8);

    // Median miss rate is non-increasing after the second iteration.
    for (int m = 1; m + 1 < 8; ++m) {
        std::vector<double> cur, nxt;
        for (const auto& r : miss_rates) {
            cur.push_back(r[m]);
            nxt.push_back(r[m + 1]);
        }
        std::sort(cur.begin(), cur.end());
        std::sort(nxt.begin(), nxt.end());
        const double med_cur = 0.5 * (cur[trials / 2] + cur[(trials - 1) / 2]);
        const double med_nxt = 0.5 * (nxt[trials / 2] + nxt[(trials - 1) / 2]);
        CHECK(med_nxt <= med_cur + 1e-12);
    }
}

TEST_CASE("blind unwrap: partitioned mode uses disjoint blocks") {
    Rng rng(88);
    CovMatrix sigma = make_cov(2, 1, 50.0, rng);
    const double delta = delta_for_target_error(sigma, 1e-5);
    const int n = 400;
    Eigen::MatrixXd truth = sample_gaussian(sigma, n, rng);
    SampleSet s = wrap_set(truth, delta);

    BlindConfig cfg;
    cfg.d = 0.5 * std::sqrt(2.0) * q_inv(0.5e-5);
    cfg.mode = BlindMode::partitioned;
    cfg.max_iterations = 10;
    cfg.stop_on_identity = false;
    BlindResult res = blind_unwrap(s, cfg);
    CHECK(res.iterations_run == 10);
    for (size_t m = 0; m < res.iterations.size(); ++m) {
        CHECK(res.iterations[m].est_begin == static_cast<int>(m) * 40);
        CHECK(res.iterations[m].est_end == static_cast<int>(m + 1) * 40);
    }

    // Too few samples for the partition.
    BlindConfig starved = cfg;
    starved.max_iterations = 200;
    CHECK_THROWS_AS(blind_unwrap(s, starved), DataError);
}

TEST_CASE("brute force unwrap: white case and gamma starvation") {
    Rng rng(9);
    const int n = 300;
    Eigen::MatrixXd truth(2, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < 2; ++i) truth(i, j) = 0.4 * rng.next_normal();
    const double delta = 8.0;
    SampleSet s = wrap_set(truth, delta);

    BruteForceResult res = brute_force_unwrap(s, 4.0, 1.0, 1.0);
    CHECK(res.unimodular);
    CHECK(is_signed_permutation(res.transform));
    CHECK((res.estimates - truth).cwiseAbs().maxCoeff() <= 1e-9);

    CHECK_THROWS_AS(brute_force_unwrap(s, 4.0, 1e-3, 1.0), AlgorithmError);
    CHECK_THROWS_AS(brute_force_unwrap(s, 4.0, 10.0, 1.0), DataError);  // gamma >= delta/2
}

TEST_CASE("brute force and iterative decoder agree") {
    Rng base(55);
    int both_exact = 0, attempts = 0;
    for (int t = 0; t < 5; ++t) {
        Rng rng = base.substream(t);
        CovMatrix sigma = make_cov(2, 1, 100.0, rng);
        const double delta = delta_for_target_error(sigma, 1e-5);
        Eigen::MatrixXd truth = sample_gaussian(sigma, 1000, rng);
        SampleSet s = wrap_set(truth, delta);

        BlindConfig cfg;
        cfg.d = 0.5 * std::sqrt(2.0) * q_inv(0.5e-5);
        BlindResult blind = blind_unwrap(s, cfg);

        const double sigma_k = std::sqrt(min_max_quadratic_form(sigma).value);
        const double gamma = 1.1 * sigma_k;
        const double det_root = std::pow(sigma.determinant(), 0.5);
        BruteForceResult brute = brute_force_unwrap(s, det_root, gamma, 1.0);

        ++attempts;
        if ((blind.estimates - brute.estimates).cwiseAbs().maxCoeff() <= 1e-6 * delta)
            ++both_exact;
    }
    CHECK(attempts == 5);
    CHECK(both_exact >= 4);
}
