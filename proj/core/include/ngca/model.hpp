#pragma once

#include <cstdint>
#include <string>

#include "ngca/types.hpp"

namespace ngca {

/// Component distribution for the planted non-gaussian subspace. Every family
/// has zero mean and identity covariance on its own d coordinates by
/// construction, so the full draw is isotropic exactly, not just in the limit.
enum class Family {
    UniformCube,      // iid coordinates uniform on [-sqrt(3), sqrt(3)]
    UniformSphere,    // uniform on the sphere of radius sqrt(d)
    Rademacher,       // iid coordinates +-1
    AxisSpike,        // ||g_d|| * theta, theta uniform on {+-e_i}
    TwoPointMixture,  // iid coordinates: 0.5 N(m, 1-m^2) + 0.5 N(-m, 1-m^2)
    PureGaussian,     // null model; d scored as 0
};

Family family_from_string(const std::string& name);
std::string family_to_string(Family family);

struct GeneratorConfig {
    int ambient_dim = 0;
    int nongauss_dim = 0;
    Family family = Family::PureGaussian;
    std::uint64_t rotation_seed = 0;
    std::uint64_t sample_seed = 0;
    double mixture_offset = 0.8;  // |mu| for TwoPointMixture, must be < 1

    void validate() const;
};

struct GroundTruth {
    Matrix basis_E;  // orthonormal n x d, d = 0 for the pure-gaussian null
};

struct WhiteningTransform {
    Vector mean;
    Matrix inv_sqrt_cov;
    double eigen_floor = 0.0;
};

/// Haar-distributed orthogonal matrix: QR of a gaussian matrix with the sign
/// convention that R's diagonal is positive.
Matrix haar_orthogonal(int n, std::uint64_t seed);

/// Draws `count` iid rows X = Q (x~, g_{n-d}) and returns the planted basis
/// (the first d columns of Q).
std::pair<SampleSet, GroundTruth> sample_ngca(const GeneratorConfig& config,
                                              Eigen::Index count);

/// Mean and symmetric inverse square root of the (eigen-floored) sample
/// covariance. Throws if an eigenvalue is <= 0 with eigen_floor = 0.
WhiteningTransform fit_whitening(const SampleSet& sample, double eigen_floor = 1e-10);

SampleSet apply_whitening(const WhiteningTransform& transform, const SampleSet& sample);

}  // namespace ngca
