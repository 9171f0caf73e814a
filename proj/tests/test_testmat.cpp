#include <doctest.h>

#include <cmath>

#include "ngca/model.hpp"
#include "ngca/testmat.hpp"

using namespace ngca;

namespace {

std::pair<SampleSet, GroundTruth> planted(Family family, int n, int d,
                                          Eigen::Index count, std::uint64_t seed) {
    GeneratorConfig config;
    config.family = family;
    config.ambient_dim = n;
    config.nongauss_dim = d;
    config.rotation_seed = seed;
    config.sample_seed = seed + 1;
    return sample_ngca(config, count);
}

}  // namespace

TEST_CASE("gaussian eigenvalue closed forms") {
    CHECK(gaussian_phi_eigenvalue(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gaussian_phi_eigenvalue(0.0) == 1.0);
    CHECK(gaussian_phi_eigenvalue(-0.25) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(gaussian_phi_eigenvalue(-0.5), std::domain_error);

    CHECK(gaussian_psi_eigenvalue(0.5) == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(gaussian_psi_eigenvalue(0.0) == 0.0);
    CHECK(gaussian_psi_eigenvalue(-0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(gaussian_psi_eigenvalue(1.0), std::domain_error);
    CHECK_THROWS_AS(gaussian_psi_eigenvalue(-1.5), std::domain_error);
}

TEST_CASE("gaussian partition closed forms") {
    CHECK(gaussian_partition(TestMatrixKind::Phi, 1, 0.5) ==
          doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
    CHECK(gaussian_partition(TestMatrixKind::Phi, 3, 0.0) == 1.0);
    CHECK(gaussian_partition(TestMatrixKind::Psi, 5, 0.0) == 1.0);
    CHECK(gaussian_partition(TestMatrixKind::Psi, 2, 0.6) ==
          doctest::Approx(1.5625).epsilon(1e-14));
    CHECK_THROWS_AS(gaussian_partition(TestMatrixKind::Phi, 2, -0.6),
                    std::domain_error);
    CHECK_THROWS_AS(gaussian_partition(TestMatrixKind::Psi, 2, 1.2),
                    std::domain_error);
}

TEST_CASE("estimate_phi on tiny inputs") {
    SUBCASE("two unit rows, alpha = 0") {
        SampleSet sample(2, 2);
        sample << 1, 0, 0, 1;
        const auto report = estimate_phi(sample, 0.0);
        CHECK((report.matrix - 0.5 * Matrix::Identity(2, 2)).norm() <= 1e-14);
        CHECK(report.partition_value == 1.0);
        CHECK(report.gaussian_eigenvalue == 1.0);
    }
    SUBCASE("single row, weight cancels in the normalization") {
        SampleSet sample(1, 2);
        sample << 1, 0;
        const auto report = estimate_phi(sample, 1.0);
        Matrix expected(2, 2);
        expected << 1, 0, 0, 0;
        CHECK((report.matrix - expected).norm() <= 1e-14);
        CHECK(report.partition_value == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }
}

TEST_CASE("estimate_psi on one pair") {
    PairedSample pairs;
    pairs.first.resize(1, 2);
    pairs.first << 1, 0;
    pairs.second.resize(1, 2);
    pairs.second << 0, 1;
    const auto report = estimate_psi(pairs, 0.0);
    Matrix expected(2, 2);
    expected << 0, 0.5, 0.5, 0;
    CHECK((report.matrix - expected).norm() <= 1e-14);
    CHECK(report.partition_value == 1.0);
}

TEST_CASE("null concentration of the estimators") {
    const auto [sample, truth] = planted(Family::PureGaussian, 6, 0, 50000, 2);
    SUBCASE("Phi at alpha = 0.2") {
        const auto report = estimate_phi(sample, 0.2);
        const double reference = 1.0 / 1.4;
        for (Eigen::Index i = 0; i < 6; ++i)
            CHECK(std::abs(report.eigenvalues(i) - reference) <= 0.05);
    }
    SUBCASE("Psi at alpha = 0.5") {
        const auto pairs = pair_samples(sample);
        const auto report = estimate_psi(pairs, 0.5);
        for (Eigen::Index i = 0; i < 6; ++i)
            CHECK(std::abs(report.eigenvalues(i) + 2.0 / 3.0) <= 0.07);
    }
}

TEST_CASE("report invariants") {
    const auto [sample, truth] = planted(Family::UniformCube, 5, 2, 5000, 3);
    const auto pairs = pair_samples(sample);
    for (const auto& report :
         {estimate_phi(sample, 0.3), estimate_psi(pairs, 0.4)}) {
        CHECK((report.matrix - report.matrix.transpose()).norm() <= 1e-12);
        const Matrix reconstructed = report.eigenvectors *
                                     report.eigenvalues.asDiagonal() *
                                     report.eigenvectors.transpose();
        CHECK((reconstructed - report.matrix).operatorNorm() <= 1e-10);
        // eigenvalues descending
        for (Eigen::Index i = 1; i < report.eigenvalues.size(); ++i)
            CHECK(report.eigenvalues(i - 1) >= report.eigenvalues(i));
        CHECK(report.partition_value > 0.0);
        // sign convention: largest-magnitude entry of each eigenvector positive
        for (Eigen::Index j = 0; j < report.eigenvectors.cols(); ++j) {
            Eigen::Index argmax = 0;
            report.eigenvectors.col(j).cwiseAbs().maxCoeff(&argmax);
            CHECK(report.eigenvectors(argmax, j) > 0.0);
        }
    }
}

TEST_CASE("weight positivity and un-normalized identity") {
    const auto [sample, truth] = planted(Family::Rademacher, 4, 2, 1000, 5);
    const auto report = estimate_phi(sample, 0.3);
    // Multiplying back by the weight sum reproduces the raw weighted sum.
    Matrix raw = Matrix::Zero(4, 4);
    double weight_sum = 0.0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        const double weight = std::exp(-0.3 * sample.row(i).squaredNorm());
        weight_sum += weight;
        raw += weight * sample.row(i).transpose() * sample.row(i);
    }
    CHECK((report.matrix * weight_sum - raw).norm() <= 1e-10 * raw.norm());
    CHECK(report.partition_value ==
          doctest::Approx(weight_sum / sample.rows()).epsilon(1e-12));
}

TEST_CASE("degenerate weights raise a clear error") {
    SampleSet sample(2, 1);
    sample << 1000.0, 1000.0;
    CHECK_THROWS_WITH_AS(static_cast<void>(estimate_phi(sample, 10.0)),
                         doctest::Contains("smaller"), std::runtime_error);
}

TEST_CASE("block structure diagnostic") {
    SUBCASE("identity matrix commutes with projectors") {
        TestMatrixReport report;
        report.matrix = Matrix::Identity(4, 4);
        Matrix basis(4, 2);
        basis << 1, 0, 0, 1, 0, 0, 0, 0;
        CHECK(block_structure_diagnostic(report, basis) <= 1e-14);
    }
    SUBCASE("full-dimensional basis gives exactly zero") {
        const auto [sample, truth] = planted(Family::AxisSpike, 4, 4, 2000, 7);
        const auto report = estimate_phi(sample, 0.2);
        CHECK(block_structure_diagnostic(report, truth.basis_E) == 0.0);
    }
    SUBCASE("planted data concentrates off-block near zero") {
        const auto [sample, truth] = planted(Family::UniformCube, 6, 2, 50000, 11);
        const auto report = estimate_phi(sample, 0.2);
        CHECK(block_structure_diagnostic(report, truth.basis_E) <= 0.1);
        const auto psi = estimate_psi(pair_samples(sample), 0.5);
        CHECK(block_structure_diagnostic(psi, truth.basis_E) <= 0.1);
    }
}

TEST_CASE("trace identity") {
    const auto [sample, truth] = planted(Family::PureGaussian, 4, 0, 50000, 13);
    SUBCASE("gaussian Phi trace matches the analytic log derivative") {
        const auto result = trace_identity_check(sample, 0.25, 1e-4);
        CHECK(result.gaussian_reference == doctest::Approx(4.0 / 1.5).epsilon(1e-12));
        CHECK(result.trace ==
              doctest::Approx(result.gaussian_reference).epsilon(0.03));
        CHECK(std::abs(result.trace - result.neg_log_deriv) <=
              5.0 * result.std_error + 1e-6);
    }
    SUBCASE("alpha = 0 trace is the covariance trace") {
        const auto result = trace_identity_check(sample, 0.0, 1e-4);
        CHECK(result.trace == doctest::Approx(4.0).epsilon(0.05));
    }
    SUBCASE("identity holds on non-gaussian input and for Psi") {
        const auto [cube, t2] = planted(Family::UniformCube, 5, 3, 20000, 17);
        const auto phi = trace_identity_check(cube, 0.3, 1e-4);
        CHECK(std::abs(phi.trace - phi.neg_log_deriv) <= 5.0 * phi.std_error + 1e-6);
        const auto psi = trace_identity_check(pair_samples(cube), 0.4, 1e-4);
        CHECK(std::abs(psi.trace - psi.neg_log_deriv) <= 5.0 * psi.std_error + 1e-6);
    }
    SUBCASE("finite difference of the closed-form Z is O(step^2)") {
        const double alpha = 0.25;
        const int n = 4;
        const auto log_z = [&](double a) {
            return std::log(gaussian_partition(TestMatrixKind::Phi, n, a));
        };
        for (double step : {1e-2, 1e-3}) {
            const double fd = -(log_z(alpha + step) - log_z(alpha - step)) / (2 * step);
            CHECK(std::abs(fd - n * gaussian_phi_eigenvalue(alpha)) <=
                  10.0 * step * step * n);
        }
    }
    SUBCASE("step outside the domain is rejected") {
        CHECK_THROWS_AS(trace_identity_check(sample, -0.49, 0.05), std::domain_error);
    }
}
