#pragma once

#include <string>
#include <vector>

#include "modunwrap/blind.hpp"
#include "modunwrap/harness.hpp"

namespace modunwrap {

// Sample files are CSV with the header line
//   # modulo-unwrap v1; K=<int>; delta=<decimal>; n=<int>
// followed by n rows of K comma-separated decimals, all printed with 17
// significant digits. Wrapped-sample readers enforce the [-delta/2, delta/2)
// range per coordinate; the raw reader does not (recovered and ground-truth
// files hold unwrapped values).

void write_vectors_csv(const std::string& path, const Eigen::MatrixXd& columns, double delta);

struct RawVectors {
    Eigen::MatrixXd columns;
    double delta;
};

RawVectors read_vectors_csv(const std::string& path);

/// Range-validated read of wrapped samples; errors name the offending row.
SampleSet read_samples_csv(const std::string& path);

/// Recovered samples as CSV plus an optional JSON sidecar carrying the
/// accumulated transform and the per-iteration log.
void write_recovery_csv(const std::string& path, const BlindResult& result, double delta);
void write_recovery_sidecar(const std::string& path, const BlindResult& result, double delta);

/// Results file: fixed key order, 17-significant-digit numbers, byte-stable
/// for identical inputs.
void write_results_json(const std::string& path, const std::vector<ExperimentResult>& results);
std::string results_to_json(const std::vector<ExperimentResult>& results);

/// Number formatting used across all emitted files (%.17g).
std::string format_number(double v);

}  // namespace modunwrap
