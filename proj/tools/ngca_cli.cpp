#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

#include "ngca/io.hpp"
#include "ngca/model.hpp"
#include "ngca/moments.hpp"
#include "ngca/reweighted_pca.hpp"
#include "ngca/spectral.hpp"
#include "ngca/testmat.hpp"

namespace {

using namespace ngca;

std::uint64_t resolve_seed(const CLI::Option* seed_option, std::uint64_t seed) {
    if (seed_option->count() > 0) return seed;
    return std::random_device{}();
}

void write_report(const Report& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.serialize();
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
    out << report.serialize();
}

int cmd_generate(const std::string& family_name, int n, int d, long count,
                 std::uint64_t seed, double mixture_offset,
                 const std::string& out_path, bool header) {
    GeneratorConfig config;
    config.family = family_from_string(family_name);
    config.ambient_dim = n;
    config.nongauss_dim = d;
    config.rotation_seed = seed;
    config.sample_seed = seed + 0x517cc1b727220a95ULL;
    config.mixture_offset = mixture_offset;

    const auto [sample, truth] = sample_ngca(config, count);

    std::vector<std::string> names;
    if (header) {
        for (int j = 0; j < n; ++j) names.push_back("x" + std::to_string(j));
    }
    write_delimited_file(out_path, sample, names);
    write_delimited_file(out_path + ".truth", truth.basis_E);
    std::cout << "wrote " << count << "x" << n << " table to " << out_path
              << " and basis to " << out_path << ".truth\n";
    return 0;
}

void fill_estimate(Report& report, const std::string& prefix,
                   const SubspaceEstimate& estimate, double beta) {
    report.set(prefix + ".dim", static_cast<long>(estimate.dim()));
    report.set(prefix + ".beta", beta);
    if (estimate.dim() > 0) {
        report.set_vector(prefix + ".eigenvalues", estimate.eigenvalues);
        report.set_matrix(prefix + ".basis", estimate.basis);
    }
}

void fill_matrix_report(Report& report, const std::string& prefix,
                        const TestMatrixReport& matrix_report) {
    report.set(prefix + ".alpha", matrix_report.alpha);
    report.set(prefix + ".partition_value", matrix_report.partition_value);
    report.set(prefix + ".gaussian_eigenvalue", matrix_report.gaussian_eigenvalue);
    report.set_vector(prefix + ".eigenvalues", matrix_report.eigenvalues);
}

int cmd_estimate(const std::string& input_path, double alpha1, double alpha2,
                 double beta1, double beta2, double k_bound, bool auto_halving,
                 bool whiten, double delta, std::uint64_t seed, const std::string& truth_path,
                 const std::string& out_path, bool drop_last, bool header,
                 bool deterministic) {
    const auto start = std::chrono::steady_clock::now();

    SampleSet sample = read_delimited_file(input_path, header);
    if (sample.rows() % 2 != 0) {
        if (!drop_last)
            throw std::runtime_error(
                "input has an odd number of rows; pass --drop-last to discard one");
        sample.conservativeResize(sample.rows() - 1, Eigen::NoChange);
    }
    if (whiten) {
        const WhiteningTransform transform = fit_whitening(sample);
        sample = apply_whitening(transform, sample);
    }
    const PairedSample pairs = pair_samples(sample);

    RunConfig config;
    config.alpha1 = alpha1;
    config.alpha2 = alpha2;
    config.beta1 = beta1;
    config.beta2 = beta2;
    config.delta = delta;
    config.K_bound = k_bound;
    config.auto_halving = auto_halving;
    const NgcaResult result = run_reweighted_pca(pairs, config);

    Report report;
    report.set("input", input_path);
    report.set("n", static_cast<long>(sample.cols()));
    report.set("pair_count", static_cast<long>(pairs.count()));
    report.set("seed", static_cast<long>(seed));
    report.set("alpha1", alpha1);
    report.set("alpha2", alpha2);
    report.set("delta", delta);
    report.set("k_bound", k_bound);
    report.set("whitened", whiten ? "true" : "false");
    report.set("halvings_used", static_cast<long>(result.halvings_used));
    fill_matrix_report(report, "phi", result.report_phi);
    fill_matrix_report(report, "psi", result.report_psi);
    fill_estimate(report, "estimate_phi", result.estimate_phi, result.beta1_used);
    fill_estimate(report, "estimate_psi", result.estimate_psi, result.beta2_used);
    report.set("combined.dim", static_cast<long>(result.combined_basis.cols()));
    if (result.combined_basis.cols() > 0)
        report.set_matrix("combined.basis", result.combined_basis);
    report.set("trace_residual.phi", result.trace_residual_phi);
    report.set("trace_residual.psi", result.trace_residual_psi);
    for (const MomentReport& moments : result.moment_diagnostics) {
        const std::string prefix = "moments.r" + std::to_string(moments.order_r);
        report.set(prefix + ".norm", moments.norm_moment);
        report.set(prefix + ".dot", moments.dot_moment);
        report.set(prefix + ".gaussian_norm", moments.gaussian_norm_moment);
        report.set(prefix + ".gaussian_dot", moments.gaussian_dot_moment);
    }

    if (!truth_path.empty()) {
        const Matrix basis_E = read_delimited_file(truth_path);
        report.set("truth.dim", static_cast<long>(basis_E.cols()));
        report.set("block.offdiag_phi",
                   block_structure_diagnostic(result.report_phi, basis_E));
        report.set("block.offdiag_psi",
                   block_structure_diagnostic(result.report_psi, basis_E));
        if (result.combined_basis.cols() > 0 && basis_E.cols() > 0) {
            // How well the combined estimate covers the true subspace:
            // min(k, d) principal angles via the SVD of the cross-Gram.
            const Vector cosines =
                (result.combined_basis.transpose() * basis_E)
                    .jacobiSvd()
                    .singularValues();
            Vector angles(cosines.size());
            for (Eigen::Index j = 0; j < cosines.size(); ++j)
                angles(j) = std::acos(std::min(1.0, cosines(j)));
            report.set_vector("recovery.angles", angles);
            // Worst angle of any selected direction to the true subspace,
            // per estimate (the union basis may exceed the true dimension).
            const Matrix projector = basis_E * basis_E.transpose();
            const auto worst_angle = [&](const Matrix& basis) {
                double worst = 0.0;
                for (Eigen::Index j = 0; j < basis.cols(); ++j) {
                    const double cosine = (projector * basis.col(j)).norm();
                    worst = std::max(worst, std::acos(std::min(1.0, cosine)));
                }
                return worst;
            };
            if (result.estimate_phi.dim() > 0)
                report.set("recovery.worst_angle_phi",
                           worst_angle(result.estimate_phi.basis));
            if (result.estimate_psi.dim() > 0)
                report.set("recovery.worst_angle_psi",
                           worst_angle(result.estimate_psi.basis));
        }
    }

    // Timing is dropped in deterministic mode so reports are byte-stable.
    if (!deterministic) {
        const auto elapsed = std::chrono::duration<double>(
            std::chrono::steady_clock::now() - start);
        report.set("elapsed_seconds", elapsed.count());
    }

    write_report(report, out_path);
    const bool any_nonempty =
        result.estimate_phi.dim() > 0 || result.estimate_psi.dim() > 0;
    return any_nonempty ? 0 : 2;
}

int cmd_test_gaussian(const std::string& input_path, int r_max, int probes,
                      std::uint64_t seed, const std::string& out_path,
                      bool drop_last, bool header) {
    SampleSet sample = read_delimited_file(input_path, header);
    if (sample.rows() % 2 != 0) {
        if (!drop_last)
            throw std::runtime_error(
                "input has an odd number of rows; pass --drop-last to discard one");
        sample.conservativeResize(sample.rows() - 1, Eigen::NoChange);
    }
    const PairedSample pairs = pair_samples(sample);

    FirstGaussianTestOptions options;
    options.probe_count = probes;
    options.probe_seed = seed;
    const FirstGaussianTestResult result = first_gaussian_test(pairs, r_max, options);

    Report report;
    report.set("input", input_path);
    report.set("n", static_cast<long>(sample.cols()));
    report.set("pair_count", static_cast<long>(pairs.count()));
    report.set("seed", static_cast<long>(seed));
    report.set("r_max", static_cast<long>(r_max));
    report.set("low_sample_warning", result.low_sample_warning ? "true" : "false");
    bool any_flag = false;
    for (const GaussianTestVerdict& verdict : result.verdicts) {
        const std::string prefix = "r" + std::to_string(verdict.order_r);
        report.set(prefix + ".norm_deviation", verdict.norm_deviation);
        report.set(prefix + ".dot_deviation", verdict.dot_deviation);
        report.set(prefix + ".norm_noise_band", verdict.norm_noise_band);
        report.set(prefix + ".dot_noise_band", verdict.dot_noise_band);
        report.set(prefix + ".norm_threshold", verdict.norm_threshold);
        report.set(prefix + ".dot_threshold", verdict.dot_threshold);
        report.set(prefix + ".norm_flag", verdict.norm_flag ? "true" : "false");
        report.set(prefix + ".dot_flag", verdict.dot_flag ? "true" : "false");
        any_flag = any_flag || verdict.nongaussian_evidence;

        const DirectionalDeviation probed = directional_deviation(
            sample, verdict.order_r, probes, seed);
        report.set(prefix + ".directional_lower_bound", probed.max_abs_deviation);
    }
    report.set("nongaussian_evidence", any_flag ? "true" : "false");
    write_report(report, out_path);
    return any_flag ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reweighted PCA for non-gaussian component analysis"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand(
        "generate", "Draw a synthetic sample with a planted non-gaussian subspace");
    std::string family = "uniform-cube";
    int n = 6, d = 2;
    long count = 0;
    std::uint64_t seed = 0;
    double mixture_offset = 0.8;
    std::string out_path;
    bool header = false;
    generate->add_option("--family", family,
                         "uniform-cube|uniform-sphere|rademacher|axis-spike|"
                         "two-point-mixture|pure-gaussian");
    generate->add_option("--n", n, "ambient dimension")->required();
    generate->add_option("--d", d, "non-gaussian dimension");
    generate->add_option("--count", count, "number of rows")
        ->required()
        ->check(CLI::PositiveNumber);
    auto* generate_seed = generate->add_option("--seed", seed, "RNG seed");
    generate->add_option("--mixture-offset", mixture_offset,
                         "mean offset for two-point-mixture, in (0,1)");
    generate->add_option("--out", out_path, "output path")->required();
    generate->add_flag("--header", header, "write a header line");

    // estimate
    auto* estimate = app.add_subcommand(
        "estimate", "Run Reweighted PCA on a delimited sample table");
    std::string input_path, truth_path, report_path;
    double alpha1 = 0.5, alpha2 = 0.5, beta1 = -1.0, beta2 = -1.0, delta = 0.05;
    double k_bound = 1.0;  // the bundled generators are all unit-scale subgaussian
    bool auto_halving = false, whiten = false, drop_last = false, input_header = false;
    bool deterministic = true;
    estimate->add_option("input", input_path, "input table")->required();
    estimate->add_option("--alpha1", alpha1, "Phi scaling parameter");
    estimate->add_option("--alpha2", alpha2, "Psi scaling parameter");
    estimate->add_option("--beta1", beta1, "Phi tolerance; omit for auto");
    estimate->add_option("--beta2", beta2, "Psi tolerance; omit for auto");
    estimate->add_flag("--auto", auto_halving, "halve alphas until an estimate appears");
    estimate->add_flag("--whiten", whiten, "whiten the sample first");
    estimate->add_option("--delta", delta, "confidence level for auto tolerances");
    estimate->add_option("--kbound", k_bound,
                         "subgaussian-norm proxy for auto thresholds")
        ->check(CLI::Range(1.0, 1e6));
    auto* estimate_seed = estimate->add_option("--seed", seed, "RNG seed");
    estimate->add_option("--truth", truth_path, "ground-truth basis for scoring");
    estimate->add_option("--out", report_path, "report path (stdout if omitted)");
    estimate->add_flag("--drop-last", drop_last, "discard the last row if the count is odd");
    estimate->add_flag("--input-header", input_header, "input has a header line");
    estimate->add_flag("--deterministic", deterministic,
                       "sequential fixed-order reductions (always on)");

    // test-gaussian
    auto* gaussian = app.add_subcommand(
        "test-gaussian", "Moment-based gaussianity audit of a sample table");
    int r_max = 4, probes = 32;
    gaussian->add_option("input", input_path, "input table")->required();
    gaussian->add_option("--rmax", r_max, "highest moment order")
        ->check(CLI::Range(2, 64));
    gaussian->add_option("--probes", probes, "random probe directions");
    auto* gaussian_seed = gaussian->add_option("--seed", seed, "RNG seed");
    gaussian->add_option("--out", report_path, "report path (stdout if omitted)");
    gaussian->add_flag("--drop-last", drop_last, "discard the last row if the count is odd");
    gaussian->add_flag("--input-header", input_header, "input has a header line");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed())
            return cmd_generate(family, n, d, count,
                                resolve_seed(generate_seed, seed), mixture_offset,
                                out_path, header);
        if (estimate->parsed())
            return cmd_estimate(input_path, alpha1, alpha2, beta1, beta2,
                                k_bound, auto_halving, whiten, delta,
                                resolve_seed(estimate_seed, seed), truth_path,
                                report_path, drop_last, input_header,
                                deterministic);
        if (gaussian->parsed())
            return cmd_test_gaussian(input_path, r_max, probes,
                                     resolve_seed(gaussian_seed, seed),
                                     report_path, drop_last, input_header);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << '\n';
        return 1;
    }
    return 1;
}
