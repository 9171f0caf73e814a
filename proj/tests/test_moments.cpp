#include <doctest.h>

#include <cmath>

#include "ngca/model.hpp"
#include "ngca/moments.hpp"
#include "ngca/rng.hpp"

using namespace ngca;

namespace {

PairedSample planted_pairs(Family family, int n, int d, Eigen::Index pair_count,
                           std::uint64_t seed) {
    GeneratorConfig config;
    config.family = family;
    config.ambient_dim = n;
    config.nongauss_dim = d;
    config.rotation_seed = seed;
    config.sample_seed = seed + 1;
    const auto [sample, truth] = sample_ngca(config, 2 * pair_count);
    return pair_samples(sample);
}

// Two-point distribution uniform on {+-e1} in R^2, built directly.
PairedSample two_point_pairs(Eigen::Index pair_count, std::uint64_t seed) {
    SampleSet sample(2 * pair_count, 2);
    sample.setZero();
    for (Eigen::Index i = 0; i < 2 * pair_count; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        sample(i, 0) = (rng.next_u64() & 1) ? 1.0 : -1.0;
    }
    return pair_samples(sample);
}

}  // namespace

TEST_CASE("gaussian_norm_moment closed form") {
    CHECK(gaussian_norm_moment(2, 4) == 8.0);
    CHECK(gaussian_norm_moment(1, 2) == 1.0);
    CHECK(gaussian_norm_moment(3, 6) == 105.0);  // 3*5*7
    CHECK(gaussian_norm_moment(4, 0) == 1.0);

    SUBCASE("even orders match integer product for n <= 50, k <= 10") {
        for (int n = 1; n <= 50; ++n) {
            for (int k = 1; k <= 10; ++k) {
                long double product = 1.0L;
                for (int j = 0; j < k; ++j) product *= n + 2 * j;
                CHECK(gaussian_norm_moment(n, 2 * k) ==
                      doctest::Approx(static_cast<double>(product)).epsilon(1e-13));
            }
        }
    }
    SUBCASE("odd order via gamma form: E||g_1|| = sqrt(2/pi)") {
        CHECK(gaussian_norm_moment(1, 1) ==
              doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    }
    SUBCASE("invalid arguments") {
        CHECK_THROWS_AS(gaussian_norm_moment(0, 2), std::invalid_argument);
        CHECK_THROWS_AS(gaussian_norm_moment(2, -1), std::invalid_argument);
    }
}

TEST_CASE("gaussian_abs_marginal_moment") {
    CHECK(gaussian_abs_marginal_moment(2) == 1.0);
    CHECK(gaussian_abs_marginal_moment(4) == 3.0);
    CHECK(gaussian_abs_marginal_moment(6) == 15.0);
    // r=3: 2^{3/2} Gamma(2) / sqrt(pi) = 2 sqrt(2/pi)
    CHECK(gaussian_abs_marginal_moment(3) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-12));
    CHECK_THROWS_AS(gaussian_abs_marginal_moment(0), std::invalid_argument);
}

TEST_CASE("spherical_dot_moment") {
    CHECK(spherical_dot_moment(3, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(spherical_dot_moment(5, 1) == 0.0);
    CHECK(spherical_dot_moment(7, 3) == 0.0);
    CHECK(spherical_dot_moment(2, 4) == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
    CHECK_THROWS_AS(spherical_dot_moment(1, 2), std::invalid_argument);
}

TEST_CASE("gaussian dot identity E<g,g'>^2k = (E||g||^2k)^2 E<theta,theta'>^2k") {
    // Monte Carlo cross-check at N = 10^6 within 3 standard errors.
    const Eigen::Index draws = 1000000;
    for (int n : {2, 4, 8}) {
        for (int k : {1, 2}) {
            const int r = 2 * k;
            double sum = 0.0, sum_sq = 0.0;
            for (Eigen::Index i = 0; i < draws; ++i) {
                CounterRng rng(static_cast<std::uint64_t>(100 + n), i);
                double dot = 0.0;
                for (int j = 0; j < n; ++j) dot += rng.normal() * rng.normal();
                const double powered = std::pow(dot, r);
                sum += powered;
                sum_sq += powered * powered;
            }
            const double mean = sum / draws;
            const double var = sum_sq / draws - mean * mean;
            const double std_error = std::sqrt(var / draws);
            const double closed = gaussian_dot_moment(n, r);
            CAPTURE(n);
            CAPTURE(r);
            CHECK(std::abs(mean - closed) <= 3.0 * std_error + 1e-12);
        }
    }
}

TEST_CASE("empirical_moments on a single pair") {
    PairedSample pairs;
    pairs.first.resize(1, 2);
    pairs.first << 1, 0;
    pairs.second.resize(1, 2);
    pairs.second << 0, 1;
    const auto report = empirical_moments(pairs, 2);
    CHECK(report.norm_moment == 1.0);
    CHECK(report.dot_moment == 0.0);
    CHECK(report.gaussian_norm_moment == 2.0);
    CHECK(report.sample_count == 2);
    CHECK_THROWS_AS(empirical_moments(pairs, 0), std::invalid_argument);
}

TEST_CASE("empirical_moments on gaussian data") {
    const auto pairs = planted_pairs(Family::PureGaussian, 4, 0, 25000, 3);
    const auto report = empirical_moments(pairs, 2);
    CHECK(report.norm_moment == doctest::Approx(4.0).epsilon(0.02));
    CHECK(std::abs(report.dot_moment - report.gaussian_dot_moment) <= 0.5);
}

TEST_CASE("gaussian_dot_moment parity") {
    CHECK(gaussian_dot_moment(4, 3) == 0.0);
    // r=2: (E||g||^2)^2 / n = n^2 / n = n
    CHECK(gaussian_dot_moment(4, 2) == doctest::Approx(4.0).epsilon(1e-13));
    // n=4, r=4: (24)^2 * 3/(4*6) = 72
    CHECK(gaussian_dot_moment(4, 4) == doctest::Approx(72.0).epsilon(1e-13));
}

TEST_CASE("axis-spike dot moment at r=4 is near 144, not the gaussian 72") {
    // E<X,X'>^4 = (E||g_4||^4)^2 * E<theta,theta'>^4 = 24^2 * (1/4) = 144.
    const auto pairs = planted_pairs(Family::AxisSpike, 4, 4, 25000, 5);
    const auto report = empirical_moments(pairs, 4);
    CHECK(report.gaussian_dot_moment == doctest::Approx(72.0));
    CHECK(report.dot_moment == doctest::Approx(144.0).epsilon(0.15));
}

TEST_CASE("eccentricity_norm_sq") {
    SUBCASE("rotationally invariant input concentrates at 0") {
        const auto pairs = planted_pairs(Family::PureGaussian, 4, 0, 25000, 7);
        for (int r : {2, 3, 4})
            CHECK(eccentricity_norm_sq(pairs, r) <=
                  0.1 * std::max(1.0, gaussian_dot_moment(4, r)));
    }
    SUBCASE("two-point +-e1 example equals 1/2") {
        // Enumerating the four equally likely pairs: E<X,X'>^2 = 1 and
        // (E||X||^2)^2 E<theta,theta'>^2 = 1/2.
        const auto pairs = two_point_pairs(25000, 11);
        CHECK(eccentricity_norm_sq(pairs, 2) == doctest::Approx(0.5).epsilon(0.05));
    }
    SUBCASE("odd r reduces to the clamped dot moment") {
        const auto pairs = planted_pairs(Family::UniformCube, 3, 1, 500, 13);
        const auto report = empirical_moments(pairs, 3);
        CHECK(eccentricity_norm_sq(pairs, 3) ==
              doctest::Approx(std::max(report.dot_moment, 0.0)));
    }
}

TEST_CASE("directional_deviation") {
    SUBCASE("gaussian null goes to zero") {
        const auto pairs = planted_pairs(Family::PureGaussian, 4, 0, 25000, 17);
        SampleSet stacked(50000, 4);
        stacked << pairs.first, pairs.second;
        const auto result = directional_deviation(stacked, 4, 16, 1);
        CHECK(result.max_abs_deviation <= 0.15);
    }
    SUBCASE("cube marginal planted along e1 is detected at r=4") {
        // |E x^4 - 3| = |9/5 - 3| = 1.2 at the planted axis.
        SampleSet sample(50000, 4);
        const double half = std::sqrt(3.0);
        for (Eigen::Index i = 0; i < sample.rows(); ++i) {
            CounterRng rng(19, static_cast<std::uint64_t>(i));
            sample(i, 0) = rng.uniform(-half, half);
            for (int j = 1; j < 4; ++j) sample(i, j) = rng.normal();
        }
        const auto result = directional_deviation(sample, 4, 8, 1);
        CHECK(result.max_abs_deviation == doctest::Approx(1.2).epsilon(0.10));
        CHECK(std::abs(result.argmax_direction(0)) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("rademacher planted axes show deviation >= 1.5") {
        SampleSet sample(50000, 4);
        for (Eigen::Index i = 0; i < sample.rows(); ++i) {
            CounterRng rng(23, static_cast<std::uint64_t>(i));
            sample(i, 0) = (rng.next_u64() & 1) ? 1.0 : -1.0;
            sample(i, 1) = (rng.next_u64() & 1) ? 1.0 : -1.0;
            sample(i, 2) = rng.normal();
            sample(i, 3) = rng.normal();
        }
        const auto result = directional_deviation(sample, 4, 8, 1);
        CHECK(result.max_abs_deviation >= 1.5);  // population |1 - 3| = 2
    }
    SUBCASE("monotone in probe_count with nested seeds") {
        const auto pairs = planted_pairs(Family::UniformCube, 5, 2, 2000, 29);
        SampleSet stacked(4000, 5);
        stacked << pairs.first, pairs.second;
        double previous = -1.0;
        for (int probes : {1, 4, 16, 64}) {
            const auto result = directional_deviation(stacked, 4, probes, 99);
            CHECK(result.max_abs_deviation >= previous);
            previous = result.max_abs_deviation;
        }
    }
    SUBCASE("max is achieved on the reported direction") {
        const auto pairs = planted_pairs(Family::Rademacher, 4, 2, 2000, 31);
        SampleSet stacked(4000, 4);
        stacked << pairs.first, pairs.second;
        const auto result = directional_deviation(stacked, 4, 8, 5);
        const Vector projections = stacked * result.argmax_direction;
        const double recomputed =
            std::abs(projections.array().pow(4).mean() - gaussian_marginal_moment(4));
        CHECK(recomputed == doctest::Approx(result.max_abs_deviation));
    }
}

TEST_CASE("first_gaussian_test") {
    SUBCASE("gaussian null raises no flags") {
        const auto pairs = planted_pairs(Family::PureGaussian, 4, 0, 25000, 37);
        const auto result = first_gaussian_test(pairs, 4);
        CHECK_FALSE(result.low_sample_warning);
        for (const auto& verdict : result.verdicts)
            CHECK_FALSE(verdict.nongaussian_evidence);
    }
    SUBCASE("planted cube is detected through the norm moment at r=4") {
        const auto pairs = planted_pairs(Family::UniformCube, 4, 1, 25000, 41);
        const auto result = first_gaussian_test(pairs, 4);
        const auto& verdict = result.verdicts.back();
        CHECK(verdict.order_r == 4);
        // E||X||^4 = 9/5 + 2*3 + 15 = 22.8 vs gaussian 24: shift of 1.2.
        CHECK(verdict.norm_deviation == doctest::Approx(1.2).epsilon(0.25));
        CHECK(verdict.norm_flag);
    }
    SUBCASE("axis-spike hides from norm moments but not dot moments") {
        const auto pairs = planted_pairs(Family::AxisSpike, 4, 4, 25000, 43);
        const auto result = first_gaussian_test(pairs, 4);
        for (const auto& verdict : result.verdicts)
            CHECK_FALSE(verdict.norm_flag);
        CHECK(result.verdicts.back().dot_flag);
    }
    SUBCASE("odd r dot deviation is |dot moment| exactly") {
        const auto pairs = planted_pairs(Family::UniformCube, 3, 1, 500, 47);
        const auto result = first_gaussian_test(pairs, 3);
        const auto& verdict = result.verdicts[1];
        const auto report = empirical_moments(pairs, 3);
        CHECK(verdict.dot_deviation == doctest::Approx(std::abs(report.dot_moment)));
    }
    SUBCASE("small samples attach a warning") {
        const auto pairs = planted_pairs(Family::PureGaussian, 3, 0, 50, 53);
        CHECK(first_gaussian_test(pairs, 2).low_sample_warning);
    }
    SUBCASE("r_max < 2 rejected") {
        const auto pairs = planted_pairs(Family::PureGaussian, 3, 0, 50, 59);
        CHECK_THROWS_AS(first_gaussian_test(pairs, 1), std::invalid_argument);
    }
}
