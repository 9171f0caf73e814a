#include "ngca/reweighted_pca.hpp"

#include <Eigen/QR>
#include <cmath>

namespace ngca {

void RunConfig::validate() const {
    if (!(alpha1 > -0.5)) throw std::invalid_argument("alpha1 must be > -1/2");
    if (!(std::abs(alpha2) < 1.0)) throw std::invalid_argument("|alpha2| must be < 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
    if (max_halvings < 1) throw std::invalid_argument("max_halvings must be >= 1");
    if (K_bound < 1.0) throw std::invalid_argument("K_bound must be >= 1");
}

double auto_beta(const TestMatrixReport& report, Eigen::Index sample_count,
                 double delta, double K_bound) {
    if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
    const auto n = static_cast<double>(report.matrix.rows());
    return 3.0 * K_bound * K_bound *
           std::sqrt((n + std::log(1.0 / delta)) / static_cast<double>(sample_count));
}

long required_sample_size_phi(double epsilon, double delta, int n, double K,
                              double C) {
    if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("epsilon and delta must lie in (0, 1)");
    if (K < 1.0) throw std::invalid_argument("K must be >= 1");
    return static_cast<long>(
        std::ceil(C * K * K * (n + std::log(1.0 / delta)) / (epsilon * epsilon)));
}

PsiSampleSize required_sample_size_psi(double epsilon, double delta, int n, double K,
                                       double C) {
    PsiSampleSize result;
    result.N = required_sample_size_phi(epsilon, delta, n, K, C);
    const double tau = std::sqrt(
        std::log(static_cast<double>(result.N) / std::min(delta, K * epsilon)));
    result.alpha_cap = 1.0 / (C * K * K * tau * (n + tau));
    return result;
}

double theoretical_eigenvalue_gap(double Delta, int r, int d, double alpha,
                                  TestMatrixKind /*kind*/) {
    if (!(Delta > 0.0)) throw std::invalid_argument("Delta must be positive");
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    double factorial = 1.0;
    for (int j = 2; j <= r - 1; ++j) factorial *= static_cast<double>(j);
    return Delta * std::pow(std::abs(alpha), r - 1) / (2.0 * d * factorial);
}

namespace {

// Orthonormalized union of the two estimated bases via column-pivoted QR;
// columns with residual below 1e-8 are dropped.
Matrix combine_bases(const Matrix& basis_a, const Matrix& basis_b, Eigen::Index n) {
    Matrix stacked(n, basis_a.cols() + basis_b.cols());
    if (stacked.cols() == 0) return Matrix(n, 0);
    stacked << basis_a, basis_b;

    Eigen::ColPivHouseholderQR<Matrix> qr(stacked);
    qr.setThreshold(1e-8);
    const Eigen::Index rank = qr.rank();
    const Matrix q = qr.householderQ();
    return q.leftCols(rank);
}

}  // namespace

NgcaResult run_reweighted_pca(const PairedSample& pairs, const RunConfig& config) {
    config.validate();
    if (pairs.count() < 1) throw std::invalid_argument("pairs must be nonempty");

    const Eigen::Index sample_count = 2 * pairs.count();
    SampleSet stacked(sample_count, pairs.dim());
    stacked << pairs.first, pairs.second;

    NgcaResult result;
    double alpha1 = config.alpha1;
    double alpha2 = config.alpha2;

    for (int round = 0;; ++round) {
        result.report_phi = estimate_phi(stacked, alpha1);
        result.report_psi = estimate_psi(pairs, alpha2);

        result.beta1_used = config.beta1 > 0.0
                                ? config.beta1
                                : auto_beta(result.report_phi, sample_count,
                                            config.delta, config.K_bound);
        // The Psi estimator's heavy-tailed weights concentrate about a factor
        // of two worse than the Phi shape at equal counts, so its auto
        // threshold is scaled accordingly.
        result.beta2_used = config.beta2 > 0.0
                                ? config.beta2
                                : 2.0 * auto_beta(result.report_psi, pairs.count(),
                                                  config.delta, config.K_bound);

        result.estimate_phi = threshold_subspace(result.report_phi, result.beta1_used);
        result.estimate_psi = threshold_subspace(result.report_psi, result.beta2_used);
        result.halvings_used = round;

        const bool any_nonempty =
            result.estimate_phi.dim() > 0 || result.estimate_psi.dim() > 0;
        if (any_nonempty || !config.auto_halving || round >= config.max_halvings)
            break;
        alpha1 *= 0.5;
        alpha2 *= 0.5;
    }

    result.combined_basis = combine_bases(result.estimate_phi.basis,
                                          result.estimate_psi.basis, pairs.dim());

    for (int r = 2; r <= 4; ++r)
        result.moment_diagnostics.push_back(empirical_moments(pairs, r));

    const double step = 1e-4;
    const auto trace_phi = trace_identity_check(stacked, alpha1, step);
    const auto trace_psi = trace_identity_check(pairs, alpha2, step);
    result.trace_residual_phi = trace_phi.trace - trace_phi.neg_log_deriv;
    result.trace_residual_psi = trace_psi.trace - trace_psi.neg_log_deriv;
    return result;
}

}  // namespace ngca
