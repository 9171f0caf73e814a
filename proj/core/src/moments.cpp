#include "ngca/moments.hpp"

#include <cmath>

#include "ngca/model.hpp"
#include "ngca/rng.hpp"

namespace ngca {

double gaussian_norm_moment(int n, int r) {
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    if (r < 0) throw std::invalid_argument("moment order must be >= 0");
    if (r == 0) return 1.0;
    if (r % 2 == 0) {
        double product = 1.0;
        for (int j = 0; j < r / 2; ++j) product *= static_cast<double>(n + 2 * j);
        return product;
    }
    // Odd orders via 2^{r/2} Gamma((n+r)/2) / Gamma(n/2).
    const double log_value = 0.5 * r * std::log(2.0) +
                             std::lgamma(0.5 * (n + r)) - std::lgamma(0.5 * n);
    return std::exp(log_value);
}

double gaussian_abs_marginal_moment(int r) {
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    if (r % 2 == 0) {
        double product = 1.0;
        for (int j = 1; j < r; j += 2) product *= static_cast<double>(j);
        return product;  // (r-1)!!
    }
    return std::exp(0.5 * r * std::log(2.0) + std::lgamma(0.5 * (r + 1))) /
           std::sqrt(M_PI);
}

double gaussian_marginal_moment(int r) {
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    if (r % 2 == 1) return 0.0;
    return gaussian_abs_marginal_moment(r);
}

double spherical_dot_moment(int n, int r) {
    if (n < 2) throw std::invalid_argument("spherical_dot_moment needs n >= 2");
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    if (r % 2 == 1) return 0.0;
    double value = 1.0;
    for (int j = 0; j < r / 2; ++j)
        value *= static_cast<double>(2 * j + 1) / static_cast<double>(n + 2 * j);
    return value;
}

double gaussian_dot_moment(int n, int r) {
    if (r % 2 == 1) return 0.0;
    const double norm_moment = gaussian_norm_moment(n, r);
    return norm_moment * norm_moment * spherical_dot_moment(n, r);
}

namespace {

struct MeanWithError {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanWithError mean_and_error(const Vector& values) {
    const auto count = static_cast<double>(values.size());
    MeanWithError result;
    result.mean = values.mean();
    if (values.size() > 1) {
        const double var =
            (values.array() - result.mean).square().sum() / (count - 1.0);
        result.std_error = std::sqrt(var / count);
    }
    return result;
}

Vector norm_powers(const PairedSample& pairs, int r) {
    const Eigen::Index count = pairs.count();
    Vector values(2 * count);
    const double half_r = 0.5 * r;
    for (Eigen::Index i = 0; i < count; ++i) {
        values(i) = std::pow(pairs.first.row(i).squaredNorm(), half_r);
        values(count + i) = std::pow(pairs.second.row(i).squaredNorm(), half_r);
    }
    return values;
}

Vector dot_powers(const PairedSample& pairs, int r) {
    const Eigen::Index count = pairs.count();
    Vector values(count);
    for (Eigen::Index i = 0; i < count; ++i)
        values(i) = std::pow(pairs.first.row(i).dot(pairs.second.row(i)),
                             static_cast<double>(r));
    return values;
}

}  // namespace

MomentReport empirical_moments(const PairedSample& pairs, int r) {
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    if (pairs.count() < 1) throw std::invalid_argument("need at least one pair");
    const int n = static_cast<int>(pairs.dim());

    MomentReport report;
    report.order_r = r;
    report.sample_count = 2 * pairs.count();

    const auto norms = mean_and_error(norm_powers(pairs, r));
    const auto dots = mean_and_error(dot_powers(pairs, r));
    report.norm_moment = norms.mean;
    report.norm_std_error = norms.std_error;
    report.dot_moment = dots.mean;
    report.dot_std_error = dots.std_error;
    report.gaussian_norm_moment = gaussian_norm_moment(n, r);
    report.gaussian_dot_moment = gaussian_dot_moment(n, r);
    return report;
}

double eccentricity_norm_sq(const PairedSample& pairs, int r) {
    const MomentReport report = empirical_moments(pairs, r);
    const int n = static_cast<int>(pairs.dim());
    const double spherical = (r % 2 == 0) ? spherical_dot_moment(n, r) : 0.0;
    const double value =
        report.dot_moment - report.norm_moment * report.norm_moment * spherical;
    return std::max(value, 0.0);
}

DirectionalDeviation directional_deviation(const SampleSet& sample, int r,
                                           int probe_count, std::uint64_t seed) {
    if (probe_count < 1) throw std::invalid_argument("probe_count must be >= 1");
    if (r < 1) throw std::invalid_argument("moment order must be >= 1");
    const Eigen::Index n = sample.cols();

    DirectionalDeviation result;
    result.order_r = r;
    result.directions.reserve(static_cast<std::size_t>(n) + probe_count);

    for (Eigen::Index axis = 0; axis < n; ++axis) {
        Vector direction = Vector::Zero(n);
        direction(axis) = 1.0;
        result.directions.push_back(std::move(direction));
    }
    // Haar-random directions: normalized gaussian vectors from a counter
    // stream, so probe i is the same for every probe_count >= i + 1.
    for (int probe = 0; probe < probe_count; ++probe) {
        CounterRng rng(seed, static_cast<std::uint64_t>(probe));
        Vector direction(n);
        do {
            for (Eigen::Index j = 0; j < n; ++j) direction(j) = rng.normal();
        } while (direction.norm() == 0.0);
        direction.normalize();
        result.directions.push_back(std::move(direction));
    }

    const double reference = gaussian_marginal_moment(r);
    result.max_abs_deviation = -1.0;
    for (const Vector& direction : result.directions) {
        const Vector projections = sample * direction;
        const double moment =
            projections.array().pow(static_cast<double>(r)).mean();
        const double deviation = std::abs(moment - reference);
        if (deviation > result.max_abs_deviation) {
            result.max_abs_deviation = deviation;
            result.argmax_direction = direction;
        }
    }
    return result;
}

FirstGaussianTestResult first_gaussian_test(const PairedSample& pairs, int r_max,
                                            const FirstGaussianTestOptions& options) {
    if (r_max < 2) throw std::invalid_argument("r_max must be >= 2");
    if (pairs.count() < 1) throw std::invalid_argument("need at least one pair");

    FirstGaussianTestResult result;
    result.low_sample_warning = pairs.count() < options.low_sample_cutoff;

    SampleSet stacked(2 * pairs.count(), pairs.dim());
    stacked << pairs.first, pairs.second;

    for (int r = 2; r <= r_max; ++r) {
        const MomentReport report = empirical_moments(pairs, r);
        GaussianTestVerdict verdict;
        verdict.order_r = r;
        verdict.norm_deviation = std::abs(report.norm_moment - report.gaussian_norm_moment);
        verdict.dot_deviation = std::abs(report.dot_moment - report.gaussian_dot_moment);
        verdict.norm_noise_band = 3.0 * report.norm_std_error;
        verdict.dot_noise_band = 3.0 * report.dot_std_error;

        double eta = options.eta_override;
        if (eta < 0.0) {
            const DirectionalDeviation probed = directional_deviation(
                stacked, r, options.probe_count, options.probe_seed);
            eta = std::min(probed.max_abs_deviation, gaussian_abs_marginal_moment(r));
        }
        const double gamma = gaussian_abs_marginal_moment(r);
        verdict.norm_threshold = options.c * eta * eta / gamma;
        verdict.dot_threshold = options.c * eta * eta;

        verdict.norm_flag = verdict.norm_deviation > verdict.norm_noise_band;
        verdict.dot_flag = verdict.dot_deviation > verdict.dot_noise_band;
        verdict.nongaussian_evidence = verdict.norm_flag || verdict.dot_flag;
        result.verdicts.push_back(verdict);
    }
    return result;
}

}  // namespace ngca
