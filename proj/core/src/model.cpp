#include "ngca/model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <sstream>

#include "ngca/rng.hpp"

namespace ngca {

Family family_from_string(const std::string& name) {
    if (name == "uniform-cube") return Family::UniformCube;
    if (name == "uniform-sphere") return Family::UniformSphere;
    if (name == "rademacher") return Family::Rademacher;
    if (name == "axis-spike") return Family::AxisSpike;
    if (name == "two-point-mixture") return Family::TwoPointMixture;
    if (name == "pure-gaussian") return Family::PureGaussian;
    throw std::invalid_argument("unknown component family: " + name);
}

std::string family_to_string(Family family) {
    switch (family) {
        case Family::UniformCube: return "uniform-cube";
        case Family::UniformSphere: return "uniform-sphere";
        case Family::Rademacher: return "rademacher";
        case Family::AxisSpike: return "axis-spike";
        case Family::TwoPointMixture: return "two-point-mixture";
        case Family::PureGaussian: return "pure-gaussian";
    }
    throw std::logic_error("unreachable family tag");
}

void GeneratorConfig::validate() const {
    if (ambient_dim < 1) throw std::invalid_argument("ambient_dim must be >= 1");
    const int d = (family == Family::PureGaussian) ? 0 : nongauss_dim;
    if (family != Family::PureGaussian && nongauss_dim < 1)
        throw std::invalid_argument("nongauss_dim must be >= 1");
    if (d > ambient_dim)
        throw std::invalid_argument("nongauss_dim must be <= ambient_dim");
    if (family == Family::TwoPointMixture &&
        !(mixture_offset > 0.0 && mixture_offset < 1.0))
        throw std::invalid_argument("mixture_offset must lie in (0, 1)");
}

Matrix haar_orthogonal(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("haar_orthogonal: dimension must be >= 1");
    Matrix gauss(n, n);
    for (int i = 0; i < n; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < n; ++j) gauss(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Matrix> qr(gauss);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    }
    return q;
}

namespace {

// One draw of the non-gaussian component in its own d coordinates.
void draw_component(Family family, int d, double mixture_offset, CounterRng& rng,
                    Eigen::Ref<Eigen::RowVectorXd> out) {
    switch (family) {
        case Family::UniformCube: {
            const double half = std::sqrt(3.0);
            for (int j = 0; j < d; ++j) out(j) = rng.uniform(-half, half);
            break;
        }
        case Family::UniformSphere: {
            double norm_sq = 0.0;
            for (int j = 0; j < d; ++j) {
                out(j) = rng.normal();
                norm_sq += out(j) * out(j);
            }
            while (norm_sq == 0.0) {  // essentially never
                for (int j = 0; j < d; ++j) {
                    out(j) = rng.normal();
                    norm_sq += out(j) * out(j);
                }
            }
            const double scale = std::sqrt(static_cast<double>(d) / norm_sq);
            for (int j = 0; j < d; ++j) out(j) *= scale;
            break;
        }
        case Family::Rademacher:
            for (int j = 0; j < d; ++j) out(j) = (rng.next_u64() & 1) ? 1.0 : -1.0;
            break;
        case Family::AxisSpike: {
            double norm_sq = 0.0;
            for (int j = 0; j < d; ++j) {
                const double g = rng.normal();
                norm_sq += g * g;
            }
            const auto axis = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
            const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
            out.setZero();
            out(axis) = sign * std::sqrt(norm_sq);
            break;
        }
        case Family::TwoPointMixture: {
            const double m = mixture_offset;
            const double sigma = std::sqrt(1.0 - m * m);
            for (int j = 0; j < d; ++j) {
                const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
                out(j) = sign * m + sigma * rng.normal();
            }
            break;
        }
        case Family::PureGaussian:
            break;
    }
}

}  // namespace

std::pair<SampleSet, GroundTruth> sample_ngca(const GeneratorConfig& config,
                                              Eigen::Index count) {
    config.validate();
    if (count < 1) throw std::invalid_argument("sample count must be >= 1");

    const int n = config.ambient_dim;
    const int d = (config.family == Family::PureGaussian) ? 0 : config.nongauss_dim;

    const Matrix rotation = haar_orthogonal(n, config.rotation_seed);

    SampleSet sample(count, n);
    Eigen::RowVectorXd local(n);
    for (Eigen::Index i = 0; i < count; ++i) {
        CounterRng rng(config.sample_seed, static_cast<std::uint64_t>(i));
        if (d > 0) draw_component(config.family, d, config.mixture_offset, rng, local.head(d));
        for (int j = d; j < n; ++j) local(j) = rng.normal();
        sample.row(i) = local * rotation.transpose();
    }

    GroundTruth truth;
    truth.basis_E = rotation.leftCols(d);
    return {std::move(sample), std::move(truth)};
}

WhiteningTransform fit_whitening(const SampleSet& sample, double eigen_floor) {
    if (sample.rows() < 2)
        throw std::invalid_argument("fit_whitening needs at least 2 rows");
    if (eigen_floor < 0.0)
        throw std::invalid_argument("eigen_floor must be nonnegative");

    const Eigen::Index count = sample.rows();
    WhiteningTransform transform;
    transform.eigen_floor = eigen_floor;
    transform.mean = sample.colwise().mean();

    const Matrix centered = sample.rowwise() - transform.mean.transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(count);

    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    Vector eigenvalues = solver.eigenvalues();
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) <= eigen_floor && eigen_floor == 0.0) {
            std::ostringstream message;
            message << "singular sample covariance: eigenvalue " << eigenvalues(i)
                    << " at index " << i << " (set eigen_floor > 0 to clamp)";
            throw std::runtime_error(message.str());
        }
        eigenvalues(i) = std::max(eigenvalues(i), eigen_floor);
    }
    const Vector inv_sqrt = eigenvalues.array().rsqrt();
    transform.inv_sqrt_cov =
        solver.eigenvectors() * inv_sqrt.asDiagonal() * solver.eigenvectors().transpose();
    return transform;
}

SampleSet apply_whitening(const WhiteningTransform& transform, const SampleSet& sample) {
    if (sample.cols() != transform.mean.size())
        throw std::invalid_argument("apply_whitening: column count mismatch");
    return (sample.rowwise() - transform.mean.transpose()) * transform.inv_sqrt_cov;
}

PairedSample pair_samples(const SampleSet& sample) {
    if (sample.rows() % 2 != 0)
        throw std::invalid_argument("pair_samples requires an even row count");
    const Eigen::Index half = sample.rows() / 2;
    PairedSample pairs;
    pairs.first = sample.topRows(half);
    pairs.second = sample.bottomRows(half);
    return pairs;
}

}  // namespace ngca
