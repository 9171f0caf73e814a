#include "ngca/testmat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace ngca {

namespace {

constexpr double kExponentCap = 700.0;  // e^x overflows just past 709

void check_phi_alpha(double alpha) {
    if (!(alpha > -0.5))
        throw std::domain_error("Phi requires alpha > -1/2");
}

void check_psi_alpha(double alpha) {
    if (!(std::abs(alpha) < 1.0))
        throw std::domain_error("Psi requires |alpha| < 1");
}

double capped_weight(double exponent) {
    if (std::abs(exponent) > kExponentCap)
        throw std::runtime_error(
            "weight exponent exceeds cap 700; use a smaller |alpha|");
    return std::exp(exponent);
}

// Eigen-decomposition with descending eigenvalues and the sign convention
// that each eigenvector's largest-magnitude entry is positive.
void attach_eigendecomposition(TestMatrixReport& report) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(report.matrix);
    const Eigen::Index n = report.matrix.rows();
    report.eigenvalues = solver.eigenvalues().reverse();
    report.eigenvectors = solver.eigenvectors().rowwise().reverse();
    for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index argmax = 0;
        report.eigenvectors.col(j).cwiseAbs().maxCoeff(&argmax);
        if (report.eigenvectors(argmax, j) < 0.0) report.eigenvectors.col(j) *= -1.0;
    }
}

}  // namespace

double gaussian_phi_eigenvalue(double alpha) {
    check_phi_alpha(alpha);
    return 1.0 / (2.0 * alpha + 1.0);
}

double gaussian_psi_eigenvalue(double alpha) {
    check_psi_alpha(alpha);
    return alpha / (alpha * alpha - 1.0);
}

double gaussian_eigenvalue(TestMatrixKind kind, double alpha) {
    return kind == TestMatrixKind::Phi ? gaussian_phi_eigenvalue(alpha)
                                       : gaussian_psi_eigenvalue(alpha);
}

double gaussian_partition(TestMatrixKind kind, int n, double alpha) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (kind == TestMatrixKind::Phi) {
        check_phi_alpha(alpha);
        return std::pow(2.0 * alpha + 1.0, -0.5 * n);
    }
    check_psi_alpha(alpha);
    return std::pow(1.0 - alpha * alpha, -0.5 * n);
}

TestMatrixReport estimate_phi(const SampleSet& sample, double alpha) {
    check_phi_alpha(alpha);
    const Eigen::Index count = sample.rows();
    if (count < 1) throw std::invalid_argument("estimate_phi needs at least one row");
    const Eigen::Index n = sample.cols();

    Matrix weighted = Matrix::Zero(n, n);
    double weight_sum = 0.0;
    for (Eigen::Index i = 0; i < count; ++i) {
        const double weight = capped_weight(-alpha * sample.row(i).squaredNorm());
        weight_sum += weight;
        weighted.noalias() += weight * sample.row(i).transpose() * sample.row(i);
    }
    if (weight_sum <= 0.0)
        throw std::runtime_error(
            "all Phi weights underflowed to zero; use a smaller alpha");

    TestMatrixReport report;
    report.kind = TestMatrixKind::Phi;
    report.alpha = alpha;
    report.matrix = weighted / weight_sum;
    report.partition_value = weight_sum / static_cast<double>(count);
    report.gaussian_eigenvalue = gaussian_phi_eigenvalue(alpha);
    attach_eigendecomposition(report);
    return report;
}

namespace {

// The Psi weight e^{-alpha <X,X'>} has tail index 1 in <X,X'>, so a single
// pairing of the two halves concentrates far too slowly. Two devices fix
// this without changing the population value beyond an O(e^{-c dot_cap})
// remainder:
//   * every pair (first_i, second_{i+k mod N}) for k < shift_count is used,
//     a subsampled two-sample U-statistic (the halves are independent, so
//     all cross pairs are valid draws of (X, X'));
//   * pairs whose dot product exceeds dot_cap = 6 sqrt(n) are winsorized by
//     clamping the dot to +-dot_cap and shrinking the outer product by the
//     same factor, which keeps trace = -(log Z-hat)'(alpha) exact.
constexpr Eigen::Index kPsiShiftCap = 128;

double psi_dot_cap(Eigen::Index n) {
    return 6.0 * std::sqrt(static_cast<double>(n));
}

// Winsorized dot products for every (i, i+k mod N) pair, shift-major.
Vector psi_statistics(const PairedSample& pairs, Eigen::Index shift_count) {
    const Eigen::Index count = pairs.count();
    const double cap = psi_dot_cap(pairs.dim());
    Vector statistics(count * shift_count);
    for (Eigen::Index k = 0; k < shift_count; ++k) {
        for (Eigen::Index i = 0; i < count; ++i) {
            const double dot =
                pairs.first.row(i).dot(pairs.second.row((i + k) % count));
            statistics(k * count + i) = std::clamp(dot, -cap, cap);
        }
    }
    return statistics;
}

}  // namespace

TestMatrixReport estimate_psi(const PairedSample& pairs, double alpha) {
    check_psi_alpha(alpha);
    const Eigen::Index count = pairs.count();
    if (count < 1) throw std::invalid_argument("estimate_psi needs at least one pair");
    const Eigen::Index n = pairs.dim();
    const Eigen::Index shift_count = std::min(count, kPsiShiftCap);
    const double cap = psi_dot_cap(n);
    if (std::abs(alpha) * cap > kExponentCap)
        throw std::runtime_error(
            "weight exponent exceeds cap 700; use a smaller |alpha|");

    Matrix weighted = Matrix::Zero(n, n);
    double weight_sum = 0.0;
    Matrix shifted(count, n);
    for (Eigen::Index k = 0; k < shift_count; ++k) {
        shifted.topRows(count - k) = pairs.second.bottomRows(count - k);
        shifted.bottomRows(k) = pairs.second.topRows(k);
        Vector coefficients(count);
        for (Eigen::Index i = 0; i < count; ++i) {
            const double dot = pairs.first.row(i).dot(shifted.row(i));
            const double clamped = std::clamp(dot, -cap, cap);
            const double weight = std::exp(-alpha * clamped);
            weight_sum += weight;
            // Shrink winsorized pairs by clamped/dot so the trace identity is exact.
            coefficients(i) = clamped == dot ? weight : weight * (clamped / dot);
        }
        weighted.noalias() +=
            pairs.first.transpose() * (coefficients.asDiagonal() * shifted);
    }
    if (weight_sum <= 0.0)
        throw std::runtime_error(
            "all Psi weights underflowed to zero; use a smaller |alpha|");

    TestMatrixReport report;
    report.kind = TestMatrixKind::Psi;
    report.alpha = alpha;
    report.matrix = (weighted + weighted.transpose()) / (2.0 * weight_sum);
    report.partition_value =
        weight_sum / static_cast<double>(count * shift_count);
    report.gaussian_eigenvalue = gaussian_psi_eigenvalue(alpha);
    attach_eigendecomposition(report);
    return report;
}

double block_structure_diagnostic(const TestMatrixReport& report,
                                  const Matrix& basis_E) {
    const Eigen::Index n = report.matrix.rows();
    const Eigen::Index d = basis_E.cols();
    if (basis_E.rows() != n)
        throw std::invalid_argument("basis row count must match matrix dimension");
    if (d == 0 || d == n) return 0.0;

    const Matrix projector = basis_E * basis_E.transpose();
    const Matrix complement = Matrix::Identity(n, n) - projector;
    const Matrix offblock = projector * report.matrix * complement;
    return offblock.jacobiSvd().singularValues()(0);
}

namespace {

TraceIdentityResult trace_identity_impl(const Vector& statistics, double trace,
                                        double alpha, double step,
                                        double gaussian_reference) {
    // statistics holds ||X_i||^2 (Phi) or <X_i,X_i'> (Psi); the empirical
    // partition function at any alpha is mean(exp(-alpha * statistics)).
    const auto log_partition = [&](double a) {
        return std::log(Vector((-a * statistics.array()).exp()).mean());
    };
    TraceIdentityResult result;
    result.trace = trace;
    result.neg_log_deriv =
        -(log_partition(alpha + step) - log_partition(alpha - step)) / (2.0 * step);
    result.gaussian_reference = gaussian_reference;

    // Plug-in SE of the self-normalized trace estimate via the delta method.
    const Vector weights = (-alpha * statistics.array()).exp();
    const double weight_mean = weights.mean();
    const Vector residuals =
        (weights.array() * (statistics.array() - trace)) / weight_mean;
    const auto count = static_cast<double>(statistics.size());
    if (count > 1) {
        const double var =
            (residuals.array() - residuals.mean()).square().sum() / (count - 1.0);
        result.std_error = std::sqrt(var / count);
    }
    return result;
}

}  // namespace

TraceIdentityResult trace_identity_check(const SampleSet& sample, double alpha,
                                         double finite_diff_step) {
    check_phi_alpha(alpha - finite_diff_step);
    if (finite_diff_step <= 0.0) throw std::invalid_argument("step must be positive");
    const TestMatrixReport report = estimate_phi(sample, alpha);
    const Vector norms_sq = sample.rowwise().squaredNorm();
    const int n = static_cast<int>(sample.cols());
    return trace_identity_impl(norms_sq, report.matrix.trace(), alpha,
                               finite_diff_step,
                               n * gaussian_phi_eigenvalue(alpha));
}

TraceIdentityResult trace_identity_check(const PairedSample& pairs, double alpha,
                                         double finite_diff_step) {
    check_psi_alpha(std::abs(alpha) + finite_diff_step);
    if (finite_diff_step <= 0.0) throw std::invalid_argument("step must be positive");
    const TestMatrixReport report = estimate_psi(pairs, alpha);
    // Same winsorized pair statistics as the estimator, so the identity holds
    // exactly for the empirical measure.
    const Vector statistics =
        psi_statistics(pairs, std::min(pairs.count(), kPsiShiftCap));
    const int n = static_cast<int>(pairs.dim());
    return trace_identity_impl(statistics, report.matrix.trace(), alpha,
                               finite_diff_step,
                               n * gaussian_psi_eigenvalue(alpha));
}

}  // namespace ngca
