#pragma once

#include <vector>

#include "ngca/moments.hpp"
#include "ngca/spectral.hpp"
#include "ngca/testmat.hpp"
#include "ngca/types.hpp"

namespace ngca {

struct RunConfig {
    double alpha1 = 0.5;   // Phi scaling, > -1/2
    double alpha2 = 0.5;   // Psi scaling, |alpha2| < 1
    double beta1 = -1.0;   // <= 0 means auto
    double beta2 = -1.0;   // <= 0 means auto
    double delta = 0.05;
    bool auto_halving = false;
    int max_halvings = 20;
    double K_bound = 2.0;  // subgaussian-norm proxy, >= 1

    void validate() const;
};

struct NgcaResult {
    SubspaceEstimate estimate_phi;
    SubspaceEstimate estimate_psi;
    Matrix combined_basis;  // orthonormalized union of the two estimates
    int halvings_used = 0;
    TestMatrixReport report_phi;
    TestMatrixReport report_psi;
    std::vector<MomentReport> moment_diagnostics;  // r = 2..4
    double trace_residual_phi = 0.0;
    double trace_residual_psi = 0.0;
    double beta1_used = 0.0;
    double beta2_used = 0.0;
};

/// Concentration-shaped noise band: 3 K^2 sqrt((n + ln(1/delta)) / sample_count).
double auto_beta(const TestMatrixReport& report, Eigen::Index sample_count,
                 double delta, double K_bound);

/// Ceiling of C K^2 (n + ln(1/delta)) / eps^2.
long required_sample_size_phi(double epsilon, double delta, int n, double K,
                              double C = 1.0);

struct PsiSampleSize {
    long N = 0;
    double alpha_cap = 0.0;  // implied |alpha2| bound 1/(C K^2 tau (n + tau))
};

/// Same N as the Phi formula plus the alpha2 cap from tau = sqrt(log(N / min{delta, K eps})).
PsiSampleSize required_sample_size_psi(double epsilon, double delta, int n, double K,
                                       double C = 1.0);

/// Lower bound Delta |alpha|^{r-1} / (2 d (r-1)!) on the non-gaussian
/// eigenvalue deviation; planning utility only.
double theoretical_eigenvalue_gap(double Delta, int r, int d, double alpha,
                                  TestMatrixKind kind);

/// Reweighted PCA: estimate both test matrices, threshold both eigenspaces,
/// orthonormalize the union. When auto_halving is set and both estimates are
/// empty, halve alpha1 and alpha2 and retry up to max_halvings.
NgcaResult run_reweighted_pca(const PairedSample& pairs, const RunConfig& config);

}  // namespace ngca
