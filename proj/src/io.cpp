#include "modunwrap/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace modunwrap {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string mode_name(BlindMode m) {
    return m == BlindMode::naive ? "naive" : "partitioned";
}

std::string d_rule_name(DRule r) {
    return r == DRule::paper_eta_half ? "paper" : "theorem3";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << content;
    if (!out) throw DataError("write failed: " + path);
}

std::string int_matrix_json(const IntMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m(i, j);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string real_matrix_json(const Eigen::MatrixXd& m) {
    std::ostringstream os;
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << format_number(m(i, j));
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace

void write_vectors_csv(const std::string& path, const Eigen::MatrixXd& columns, double delta) {
    if (!(delta > 0.0)) throw DataError("write_vectors_csv: delta must be positive");
    std::ostringstream os;
    os << "# modulo-unwrap v1; K=" << columns.rows() << "; delta=" << format_number(delta)
       << "; n=" << columns.cols() << "\n";
    for (Eigen::Index j = 0; j < columns.cols(); ++j) {
        for (Eigen::Index i = 0; i < columns.rows(); ++i) {
            if (i) os << ",";
            os << format_number(columns(i, j));
        }
        os << "\n";
    }
    write_file(path, os.str());
}

RawVectors read_vectors_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError(path + ": empty file");

    int k = 0;
    long n = 0;
    double delta = 0.0;
    if (std::sscanf(header.c_str(), "# modulo-unwrap v1; K=%d; delta=%lf; n=%ld", &k, &delta,
                    &n) != 3)
        throw DataError(path + ": malformed header");
    if (k < 1 || n < 0 || !(delta > 0.0)) throw DataError(path + ": malformed header values");
    if (n == 0) throw DataError(path + ": empty data section");

    Eigen::MatrixXd cols(k, n);
    std::string line;
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= n) throw DataError(path + ": more data rows than the declared n");
        std::stringstream ss(line);
        std::string field;
        int i = 0;
        while (std::getline(ss, field, ',')) {
            if (i >= k)
                throw DataError(path + ": row " + std::to_string(row + 1) +
                                " has more than K fields");
            try {
                size_t used = 0;
                cols(i, row) = std::stod(field, &used);
                if (used != field.size() &&
                    field.find_first_not_of(" \t\r", used) != std::string::npos)
                    throw std::invalid_argument(field);
            } catch (const std::exception&) {
                throw DataError(path + ": row " + std::to_string(row + 1) +
                                " has a malformed number");
            }
            ++i;
        }
        if (i != k)
            throw DataError(path + ": row " + std::to_string(row + 1) + " has " +
                            std::to_string(i) + " fields, expected K=" + std::to_string(k));
        ++row;
    }
    if (row != n)
        throw DataError(path + ": declared n=" + std::to_string(n) + " but found " +
                        std::to_string(row) + " rows");
    return RawVectors{std::move(cols), delta};
}

SampleSet read_samples_csv(const std::string& path) {
    RawVectors raw = read_vectors_csv(path);
    const double half = 0.5 * raw.delta;
    for (Eigen::Index j = 0; j < raw.columns.cols(); ++j) {
        for (Eigen::Index i = 0; i < raw.columns.rows(); ++i) {
            const double v = raw.columns(i, j);
            if (!(v >= -half && v < half))
                throw DataError(path + ": row " + std::to_string(j + 1) +
                                " coordinate outside [-delta/2, delta/2)");
        }
    }
    return SampleSet{std::move(raw.columns), ModParam(raw.delta)};
}

void write_recovery_csv(const std::string& path, const BlindResult& result, double delta) {
    write_vectors_csv(path, result.estimates, delta);
}

void write_recovery_sidecar(const std::string& path, const BlindResult& result, double delta) {
    std::ostringstream os;
    os << "{\"format\":\"modulo-unwrap-recovery v1\""
       << ",\"K\":" << result.estimates.rows() << ",\"delta\":" << format_number(delta)
       << ",\"n\":" << result.estimates.cols() << ",\"iterations_run\":" << result.iterations_run
       << ",\"A\":" << int_matrix_json(result.transform.matrix()) << ",\"iterations\":[";
    for (size_t m = 0; m < result.iterations.size(); ++m) {
        const IterationRecord& rec = result.iterations[m];
        if (m) os << ",";
        os << "{\"d_used\":" << format_number(rec.d_used)
           << ",\"component_size\":" << rec.component_size
           << ",\"est_begin\":" << rec.est_begin << ",\"est_end\":" << rec.est_end
           << ",\"A_tilde\":" << int_matrix_json(rec.step_transform)
           << ",\"est_cov\":" << real_matrix_json(rec.est_cov) << "}";
    }
    os << "]}\n";
    write_file(path, os.str());
}

std::string results_to_json(const std::vector<ExperimentResult>& results) {
    std::ostringstream os;
    os << "{\"format\":\"modulo-unwrap-results v1\",\"results\":[";
    for (size_t c = 0; c < results.size(); ++c) {
        const ExperimentResult& r = results[c];
        const ExperimentConfig& g = r.config;
        if (c) os << ",";
        os << "{\"config\":{\"K\":" << g.K << ",\"rank\":" << g.rank
           << ",\"snr\":" << format_number(g.snr) << ",\"eps\":" << format_number(g.eps)
           << ",\"n\":" << g.n << ",\"trials\":" << g.trials << ",\"seed\":" << g.seed
           << ",\"mode\":\"" << mode_name(g.mode) << "\",\"d_rule\":\"" << d_rule_name(g.d_rule)
           << "\",\"M\":" << g.M << "}"
           << ",\"pe_blind\":" << format_number(r.pe_blind)
           << ",\"pe_blind_se\":" << format_number(r.pe_blind_se)
           << ",\"pe_informed_lower\":" << format_number(r.pe_informed_lower) << ",\"trials\":[";
        for (size_t t = 0; t < r.per_trial.size(); ++t) {
            if (t) os << ",";
            os << "{\"success\":" << (r.per_trial[t].success ? "true" : "false")
               << ",\"iterations\":" << r.per_trial[t].iterations << "}";
        }
        os << "]}";
    }
    os << "]}\n";
    return os.str();
}

void write_results_json(const std::string& path, const std::vector<ExperimentResult>& results) {
    write_file(path, results_to_json(results));
}

}  // namespace modunwrap
