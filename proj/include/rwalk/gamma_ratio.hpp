#pragma once

#include <cstdint>
#include <vector>

namespace rwalk {

/// log Gamma(n + x) - log Gamma(n) for n >= 1 and n + x > 0, accurate to a few
/// ulps of the result (no cancellation between two large log-gammas).
double log_gamma_ratio(std::uint64_t n, double x);

/// a_n(x) = Gamma(n) Gamma(1 + x) / Gamma(n + x) = prod_{k=1}^{n-1} k / (k + x).
/// Throws std::domain_error when 1 + x <= 0 or n + x <= 0.
double gamma_ratio(double x, std::uint64_t n);

/// gamma_{j,n}(x) = prod_{k=j}^{n-1} (k + x) / k, with the empty product 1.
/// A vanishing factor (x = -k for some j <= k < n) gives exactly 0.
double growth_factor(double x, std::uint64_t j, std::uint64_t n);

/// a_1..a_N(x) evaluated term by term in log space.
struct GammaRatioSeq {
    double x = 0.0;
    std::vector<double> values;  // values[n-1] = a_n

    GammaRatioSeq(double x, std::uint64_t n_max);
    double operator()(std::uint64_t n) const { return values.at(n - 1); }
};

}  // namespace rwalk
