#include "ngca/spectral.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <vector>

namespace ngca {

SubspaceEstimate threshold_subspace(const TestMatrixReport& report, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");

    std::vector<Eigen::Index> selected;
    for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i) {
        if (std::abs(report.eigenvalues(i) - report.gaussian_eigenvalue) > beta)
            selected.push_back(i);
    }

    SubspaceEstimate estimate;
    estimate.source = report.kind;
    estimate.alpha = report.alpha;
    estimate.beta = beta;
    estimate.basis.resize(report.matrix.rows(),
                          static_cast<Eigen::Index>(selected.size()));
    estimate.eigenvalues.resize(static_cast<Eigen::Index>(selected.size()));
    for (std::size_t j = 0; j < selected.size(); ++j) {
        estimate.basis.col(static_cast<Eigen::Index>(j)) =
            report.eigenvectors.col(selected[j]);
        estimate.eigenvalues(static_cast<Eigen::Index>(j)) =
            report.eigenvalues(selected[j]);
    }
    return estimate;
}

double subspace_distance(const Matrix& basis_a, const Matrix& basis_b) {
    if (basis_a.rows() != basis_b.rows() || basis_a.cols() != basis_b.cols())
        throw std::invalid_argument(
            "subspace_distance is defined for equal dimensions only");
    const Matrix difference = basis_a * basis_a.transpose() -
                              basis_b * basis_b.transpose();
    return difference.norm();
}

Vector principal_angles(const Matrix& basis_a, const Matrix& basis_b) {
    if (basis_a.rows() != basis_b.rows() || basis_a.cols() != basis_b.cols())
        throw std::invalid_argument(
            "principal_angles is defined for equal dimensions only");
    const Matrix product = basis_a.transpose() * basis_b;
    Vector singular = product.jacobiSvd().singularValues();
    Vector angles(singular.size());
    for (Eigen::Index i = 0; i < singular.size(); ++i)
        angles(i) = std::acos(std::min(1.0, std::max(-1.0, singular(i))));
    return angles;
}

double davis_kahan_bound(double gap, double perturbation, int d) {
    if (!(gap > 0.0)) throw std::invalid_argument("eigengap must be positive");
    if (perturbation < 0.0)
        throw std::invalid_argument("perturbation must be nonnegative");
    if (d < 1) throw std::invalid_argument("subspace dimension must be >= 1");
    return 2.0 * std::sqrt(2.0 * d) * perturbation / gap;
}

}  // namespace ngca
