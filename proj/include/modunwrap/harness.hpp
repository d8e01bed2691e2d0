#pragma once

#include <string>
#include <vector>

#include "modunwrap/blind.hpp"
#include "modunwrap/informed.hpp"

namespace modunwrap {

enum class DRule { paper_eta_half, theorem3 };

struct ExperimentConfig {
    int K = 2;
    int rank = 1;
    double snr = 100.0;
    double eps = 2e-5;
    int n = 1000;
    int trials = 50;
    std::uint64_t seed = 1;
    BlindMode mode = BlindMode::naive;
    DRule d_rule = DRule::paper_eta_half;
    int M = 30;
    // Only the theorem3 d-rule consumes these.
    double p_assumed = 0.5;
    double rho_pack_assumed = 0.5;
    int threads = 0;  // 0 -> hardware concurrency
};

struct TrialOutcome {
    bool success;
    int iterations;
    double wall_time_s;  // in-memory only; never serialized
};

struct ExperimentResult {
    ExperimentConfig config;
    double pe_blind;
    double pe_blind_se;
    double pe_informed_lower;  // block_error_lower(eps, n)
    std::vector<TrialOutcome> per_trial;
};

/// Sigma = I_K + snr * H H^T with H a K x rank matrix of standard normals.
CovMatrix make_cov(int K, int rank, double snr, std::uint64_t seed);
CovMatrix make_cov(int K, int rank, double snr, Rng& rng);

/// Connectivity distance for a trial: the simulation default
/// 0.5 sqrt(K) Qinv(eps/2) (unit noise floor), or the conservative
/// 0.01 * 2 sqrt(K) delta / scale-bound rule.
double choose_d(const ExperimentConfig& cfg, double delta);

/// One Monte-Carlo cell: `trials` independent draws of H, each with fresh
/// samples, blind-unwrapped; success means every sample matches ground truth
/// to 1e-6 * delta in max norm. Deterministic in (config, seed) regardless
/// of thread count.
ExperimentResult run_cell(const ExperimentConfig& cfg);

/// Runs every cell in order; when `out_path` is nonempty the results file is
/// written there, and a one-line-per-cell table goes to `table` if given.
std::vector<ExperimentResult> sweep(const std::vector<ExperimentConfig>& grid,
                                    const std::string& out_path, std::ostream* table);

}  // namespace modunwrap
