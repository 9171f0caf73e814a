#pragma once

#include "ngca/testmat.hpp"
#include "ngca/types.hpp"

namespace ngca {

struct SubspaceEstimate {
    Matrix basis;        // orthonormal n x k, k may be 0
    Vector eigenvalues;  // the k outlier eigenvalues
    TestMatrixKind source = TestMatrixKind::Phi;
    double alpha = 0.0;
    double beta = 0.0;

    Eigen::Index dim() const { return basis.cols(); }
};

/// Eigenvectors whose eigenvalues are strictly farther than beta from the
/// gaussian reference value of the report.
SubspaceEstimate threshold_subspace(const TestMatrixReport& report, double beta);

/// d(F, F') = ||F F^T - F' F'^T||_F; defined for equal dimensions only.
double subspace_distance(const Matrix& basis_a, const Matrix& basis_b);

/// Ascending principal angles in [0, pi/2]: arccos of the singular values of
/// basis_a^T basis_b.
Vector principal_angles(const Matrix& basis_a, const Matrix& basis_b);

/// 2 sqrt(2d) * perturbation / gap, the guaranteed bound on d(F, F-hat).
double davis_kahan_bound(double gap, double perturbation, int d);

}  // namespace ngca
