#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace ngca {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Rows are observations, columns are coordinates.
using SampleSet = Matrix;

/// Two aligned sample sets (X_i, X_i') of equal shape for dot-product statistics.
struct PairedSample {
    SampleSet first;
    SampleSet second;

    Eigen::Index count() const { return first.rows(); }
    Eigen::Index dim() const { return first.cols(); }
};

/// Deterministic split of a 2N-row sample: row i pairs with row N+i.
PairedSample pair_samples(const SampleSet& sample);

}  // namespace ngca
