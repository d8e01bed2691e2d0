#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <sstream>

#include "modunwrap/io.hpp"
#include "modunwrap/theory.hpp"

using namespace modunwrap;

namespace {

// Exit codes: 0 ok, 1 usage, 2 data, 3 algorithm-declared failure.
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kAlgorithmError = 3;

std::map<std::string, double> parse_args_list(const std::string& spec) {
    std::map<std::string, double> out;
    if (spec.empty()) return out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--args", "expected k=v pairs, got '" + item + "'");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--args", "malformed number in '" + item + "'");
        }
    }
    return out;
}

double need(const std::map<std::string, double>& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw CLI::ValidationError("--args", "missing argument '" + key + "'");
    return it->second;
}

double get_or(const std::map<std::string, double>& args, const std::string& key, double dflt) {
    auto it = args.find(key);
    return it == args.end() ? dflt : it->second;
}

std::string bounds_eval(const std::string& calc, const std::map<std::string, double>& a) {
    std::ostringstream os;
    auto scalar = [&](double v) {
        os << "{\"calc\":\"" << calc << "\",\"value\":" << format_number(v) << "}\n";
    };
    if (calc == "norm_tail_rate") {
        scalar(norm_tail_rate(need(a, "alpha")));
    } else if (calc == "miss_dynamics_step") {
        DynamicsParams dp(static_cast<int>(need(a, "K")), need(a, "eps"), get_or(a, "beta", 0.0));
        scalar(miss_dynamics_step(need(a, "p"), dp));
    } else if (calc == "miss_dynamics_fixed_point") {
        DynamicsParams dp(static_cast<int>(need(a, "K")), need(a, "eps"), get_or(a, "beta", 0.0));
        scalar(miss_dynamics_fixed_point(dp));
    } else if (calc == "dilation_lower_bound") {
        scalar(dilation_lower_bound(need(a, "p"), need(a, "gamma")));
    } else if (calc == "tail_dilation_check") {
        TailCheck t = tail_dilation_check(need(a, "p"), need(a, "gamma"));
        os << "{\"calc\":\"" << calc << "\",\"lhs\":" << format_number(t.lhs)
           << ",\"rhs\":" << format_number(t.rhs) << "}\n";
    } else if (calc == "iteration_budget") {
        os << "{\"calc\":\"" << calc << "\",\"value\":" << iteration_budget(need(a, "P")) << "}\n";
    } else if (calc == "min_eigen_scale_bound") {
        scalar(min_eigen_scale_bound(need(a, "eps"), need(a, "P"), need(a, "rho_pack"),
                                     static_cast<int>(need(a, "K"))));
    } else if (calc == "det_root_bound") {
        scalar(det_root_bound(need(a, "eps"), static_cast<int>(need(a, "K")), need(a, "delta")));
    } else if (calc == "converged_miss_bound") {
        scalar(converged_miss_bound(need(a, "eps"), static_cast<int>(need(a, "K")),
                                    get_or(a, "beta", 0.0)));
    } else if (calc == "blind_block_error_bound") {
        scalar(blind_block_error_bound(need(a, "eps"), static_cast<int>(need(a, "K")),
                                       static_cast<long>(need(a, "n"))));
    } else if (calc == "transform_recovery_failure_bound") {
        scalar(transform_recovery_failure_bound(need(a, "eps"), static_cast<int>(need(a, "K")),
                                                static_cast<long>(need(a, "n"))));
    } else if (calc == "estimation_failure_bound") {
        EstimationFailureBound b = estimation_failure_bound(
            static_cast<long>(need(a, "n")), static_cast<int>(need(a, "K")), need(a, "eps"),
            need(a, "P"), need(a, "eta"), need(a, "beta"), need(a, "delta_over_tau"),
            need(a, "det_root_over_tau"), get_or(a, "C", 1.0));
        os << "{\"calc\":\"" << calc << "\",\"false_positive\":" << format_number(b.false_positive)
           << ",\"many_escapees\":" << format_number(b.many_escapees)
           << ",\"sample_est\":" << format_number(b.sample_est)
           << ",\"miss_cover\":" << format_number(b.miss_cover)
           << ",\"total\":" << format_number(b.total)
           << ",\"beta_bar\":" << format_number(b.beta_bar)
           << ",\"n_required\":" << format_number(b.n_required) << "}\n";
    } else if (calc == "truncation_lower_constant") {
        scalar(truncation_lower_constant(need(a, "P"), static_cast<int>(need(a, "K"))));
    } else if (calc == "block_error_lower") {
        scalar(block_error_lower(need(a, "eps"), static_cast<long>(need(a, "n"))));
    } else if (calc == "q_func") {
        scalar(q_func(need(a, "t")));
    } else if (calc == "q_inv") {
        scalar(q_inv(need(a, "p")));
    } else if (calc == "chi2_cdf") {
        scalar(chi2_cdf(need(a, "x"), static_cast<int>(need(a, "dof"))));
    } else {
        throw CLI::ValidationError("--calc", "unknown calculator '" + calc + "'");
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blind recovery of modulo-reduced Gaussian samples"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Monte-Carlo cell over random covariances");
    ExperimentConfig cfg;
    std::string sim_mode = "naive", sim_drule = "paper", sim_out;
    sim->add_option("--K", cfg.K, "dimension")->required();
    sim->add_option("--rank", cfg.rank, "covariance rank parameter")->required();
    sim->add_option("--snr", cfg.snr, "covariance snr parameter")->required();
    sim->add_option("--eps", cfg.eps, "target informed error rate")->required();
    sim->add_option("--n", cfg.n, "samples per trial")->required();
    sim->add_option("--trials", cfg.trials, "independent trials")->required();
    sim->add_option("--seed", cfg.seed, "base seed")->required();
    sim->add_option("--mode", sim_mode, "naive|partitioned");
    sim->add_option("--d-rule", sim_drule, "paper|theorem3");
    sim->add_option("--M", cfg.M, "maximum iterations");
    sim->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
    sim->add_option("--out", sim_out, "results JSON path")->required();

    auto* unw = app.add_subcommand("unwrap", "Blind-unwrap a wrapped sample file");
    std::string unw_in, unw_out, unw_sidecar, unw_mode = "naive";
    double unw_d = 0.0;
    int unw_m = 30;
    unw->add_option("--input", unw_in, "wrapped samples CSV")->required();
    unw->add_option("--d", unw_d,
                    "connectivity distance (default 0.5*sqrt(K)*Qinv(eps/2) at eps=1e-5, "
                    "unit noise floor)");
    unw->add_option("--M", unw_m, "maximum iterations");
    unw->add_option("--mode", unw_mode, "naive|partitioned");
    unw->add_option("--out", unw_out, "recovered samples CSV")->required();
    unw->add_option("--sidecar", unw_sidecar, "JSON sidecar path");

    auto* bnd = app.add_subcommand("bounds", "Evaluate a closed-form calculator");
    std::string bnd_calc, bnd_args;
    bnd->add_option("--calc", bnd_calc, "calculator name")->required();
    bnd->add_option("--args", bnd_args, "comma-separated k=v pairs");

    auto* gen = app.add_subcommand("gen", "Generate synthetic wrapped/truth sample files");
    int gen_k = 2, gen_rank = 1, gen_n = 1000;
    double gen_snr = 100.0, gen_eps = 1e-5;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_truth;
    gen->add_option("--K", gen_k)->required();
    gen->add_option("--rank", gen_rank)->required();
    gen->add_option("--snr", gen_snr)->required();
    gen->add_option("--eps", gen_eps)->required();
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--seed", gen_seed)->required();
    gen->add_option("--out", gen_out, "wrapped samples CSV")->required();
    gen->add_option("--truth", gen_truth, "ground-truth CSV")->required();

    try {
        app.parse(argc, argv);

        if (*sim) {
            if (sim_mode == "naive") cfg.mode = BlindMode::naive;
            else if (sim_mode == "partitioned") cfg.mode = BlindMode::partitioned;
            else throw CLI::ValidationError("--mode", "expected naive|partitioned");
            if (sim_drule == "paper") cfg.d_rule = DRule::paper_eta_half;
            else if (sim_drule == "theorem3") cfg.d_rule = DRule::theorem3;
            else throw CLI::ValidationError("--d-rule", "expected paper|theorem3");
            sweep({cfg}, sim_out, &std::cout);
        } else if (*unw) {
            SampleSet samples = read_samples_csv(unw_in);
            BlindConfig bc;
            bc.d = unw_d > 0.0
                       ? unw_d
                       : 0.5 * std::sqrt(static_cast<double>(samples.dim())) * q_inv(0.5e-5);
            bc.max_iterations = unw_m;
            if (unw_mode == "naive") bc.mode = BlindMode::naive;
            else if (unw_mode == "partitioned") bc.mode = BlindMode::partitioned;
            else throw CLI::ValidationError("--mode", "expected naive|partitioned");
            BlindResult res = blind_unwrap(samples, bc);
            write_recovery_csv(unw_out, res, samples.delta.delta);
            if (!unw_sidecar.empty())
                write_recovery_sidecar(unw_sidecar, res, samples.delta.delta);
            std::cout << "iterations=" << res.iterations_run << " n=" << samples.size() << "\n";
        } else if (*bnd) {
            std::cout << bounds_eval(bnd_calc, parse_args_list(bnd_args));
        } else if (*gen) {
            CovMatrix sigma = make_cov(gen_k, gen_rank, gen_snr, gen_seed);
            const double delta = delta_for_target_error(sigma, gen_eps);
            Rng rng(gen_seed);
            Rng sample_rng = rng.substream(0);
            Eigen::MatrixXd truth = sample_gaussian(sigma, gen_n, sample_rng);
            write_vectors_csv(gen_truth, truth, delta);
            write_vectors_csv(gen_out, wrap_columns(truth, delta), delta);
            std::cout << "delta=" << format_number(delta) << " n=" << gen_n << "\n";
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kDataError;
    } catch (const AlgorithmError& e) {
        std::cerr << "algorithm error: " << e.what() << "\n";
        return kAlgorithmError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kAlgorithmError;
    }
    return 0;
}
