#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rwalk {

/// Running central moments up to order four, mergeable (Pebay's update).
class Moments {
public:
    void add(double x) noexcept;
    void merge(const Moments& other) noexcept;

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two values.
    double variance() const noexcept;
    /// Standard error of the mean.
    double mean_se() const noexcept;
    /// Large-sample standard error of the sample variance, sqrt((mu4 - s^4)/n).
    double variance_se() const noexcept;
    /// Biased central moments M_k / n.
    double central(int k) const noexcept;

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double m3_ = 0.0;
    double m4_ = 0.0;
};

/// Merges in a fixed balanced binary tree, so the result depends only on the
/// order of `parts`, not on how they were produced.
Moments merge_pairwise(std::span<const Moments> parts);
Moments moments_of(std::span<const double> values);

double normal_cdf(double x) noexcept;
double normal_pdf(double x) noexcept;

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda) noexcept;

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// One-sample KS test of `values` against Normal(mean, variance), with the
/// asymptotic Kolmogorov law and Stephens' finite-n correction.
KsResult ks_normal(std::span<const double> values, double mean, double variance);

/// Linear-interpolation quantile (type 7). Copies and sorts.
double quantile(std::span<const double> values, double q);
double median(std::span<const double> values);

/// Unbiased sample covariance.
double sample_covariance(std::span<const double> x, std::span<const double> y);

}  // namespace rwalk
