#pragma once

#include "ngca/types.hpp"

namespace ngca {

enum class TestMatrixKind { Phi, Psi };

/// Eigenvalue of Phi_{g,alpha} = (2 alpha + 1)^{-1} I_n; requires alpha > -1/2.
double gaussian_phi_eigenvalue(double alpha);

/// Eigenvalue of Psi_{g,alpha} = alpha (alpha^2 - 1)^{-1} I_n; requires |alpha| < 1.
double gaussian_psi_eigenvalue(double alpha);

/// Z_{Phi,g_n}(alpha) = (2 alpha + 1)^{-n/2}, Z_{Psi,g_n}(alpha) = (1 - alpha^2)^{-n/2}.
double gaussian_partition(TestMatrixKind kind, int n, double alpha);

double gaussian_eigenvalue(TestMatrixKind kind, double alpha);

struct TestMatrixReport {
    TestMatrixKind kind = TestMatrixKind::Phi;
    double alpha = 0.0;
    Matrix matrix;                    // symmetric n x n
    double partition_value = 0.0;     // mean weight: Z-hat over the weight count
    double gaussian_eigenvalue = 0.0;
    Vector eigenvalues;               // descending
    Matrix eigenvectors;              // columns match eigenvalues
};

/// Phi-hat_{X,alpha} = (1/Z-hat) sum e^{-alpha ||X_i||^2} X_i X_i^T.
TestMatrixReport estimate_phi(const SampleSet& sample, double alpha);

/// Psi-hat_{X,alpha} = (1/Z-hat) sum e^{-alpha <X_i,X_j'>} (X_i X_j'^T + X_j' X_i^T),
/// Z-hat = 2 sum of the weights, where the sum runs over the pairs
/// (i, j = i+k mod N) for k < min(N, 128) -- all such cross pairs are valid
/// independent copies, and averaging them is needed because the weight is
/// heavy-tailed. Pairs with |<X_i,X_j'>| > 6 sqrt(n) are winsorized (dot
/// clamped, outer product shrunk by the same factor).
TestMatrixReport estimate_psi(const PairedSample& pairs, double alpha);

/// Spectral norm of P_E * matrix * P_{E-perp}; the population value is 0 by
/// the block-diagonalization lemma. d = 0 or d = n gives 0 exactly.
double block_structure_diagnostic(const TestMatrixReport& report, const Matrix& basis_E);

struct TraceIdentityResult {
    double trace = 0.0;
    double neg_log_deriv = 0.0;   // centered finite difference of -log Z-hat
    double std_error = 0.0;       // plug-in SE of the trace estimate
    double gaussian_reference = 0.0;  // n (2a+1)^{-1} or n a (a^2-1)^{-1}
};

TraceIdentityResult trace_identity_check(const SampleSet& sample, double alpha,
                                         double finite_diff_step);
TraceIdentityResult trace_identity_check(const PairedSample& pairs, double alpha,
                                         double finite_diff_step);

}  // namespace ngca
