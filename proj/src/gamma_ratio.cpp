#include "rwalk/gamma_ratio.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rwalk {

namespace {

// B_{2k} / (2k (2k - 1)), k = 1..8.
constexpr std::array<double, 8> kStirling{
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0,
    -3617.0 / 122400.0};

// Difference of two Stirling series at z and z + a, written so that nothing
// of size log Gamma(z) is ever formed.
double stirling_difference(double z, double a) {
    const double l = std::log1p(a / z);
    double result = a * std::log(z) + (z + a - 0.5) * l - a;
    double zp = z;  // z^(2k-1)
    for (std::size_t k = 0; k < kStirling.size(); ++k) {
        const double e = 1.0 - 2.0 * static_cast<double>(k + 1);
        result += kStirling[k] / zp * std::expm1(e * l);
        zp *= z * z;
    }
    return result;
}

}  // namespace

double log_gamma_ratio(std::uint64_t n, double x) {
    if (n == 0) throw std::domain_error("log_gamma_ratio: n must be >= 1");
    const double nd = static_cast<double>(n);
    if (!(nd + x > 0.0)) throw std::domain_error("log_gamma_ratio: n + x must be positive");
    if (x == 0.0) return 0.0;
    const auto threshold = static_cast<std::uint64_t>(std::ceil(16.0 + 2.0 * std::fabs(x)));
    if (n >= threshold) return stirling_difference(nd, x);
    // L(k + 1) = L(k) + log(1 + x / k): step down from the asymptotic region.
    double result = stirling_difference(static_cast<double>(threshold), x);
    for (std::uint64_t k = threshold - 1; k >= n; --k) {
        result -= std::log1p(x / static_cast<double>(k));
        if (k == n) break;
    }
    return result;
}

double gamma_ratio(double x, std::uint64_t n) {
    if (n == 0) throw std::domain_error("gamma_ratio: n must be >= 1");
    if (!(1.0 + x > 0.0) || !(static_cast<double>(n) + x > 0.0)) {
        throw std::domain_error("gamma_ratio: pole at x = " + std::to_string(x));
    }
    if (n == 1) return 1.0;
    return std::exp(-(log_gamma_ratio(n, x) - log_gamma_ratio(1, x)));
}

double growth_factor(double x, std::uint64_t j, std::uint64_t n) {
    if (j == 0 || n < j) throw std::domain_error("growth_factor: need 1 <= j <= n");
    if (n == j) return 1.0;
    // Factors with k + x <= 0 (only when x <= -j) are multiplied directly.
    double prod = 1.0;
    std::uint64_t k = j;
    for (; k < n && !(static_cast<double>(k) + x > 0.0); ++k) {
        const double f = (static_cast<double>(k) + x) / static_cast<double>(k);
        if (f == 0.0) return 0.0;
        prod *= f;
    }
    if (k == n) return prod;
    return prod * std::exp(log_gamma_ratio(n, x) - log_gamma_ratio(k, x));
}

GammaRatioSeq::GammaRatioSeq(double x_, std::uint64_t n_max) : x(x_) {
    if (n_max == 0) throw std::domain_error("GammaRatioSeq: n_max must be >= 1");
    values.resize(n_max);
    const double base = log_gamma_ratio(1, x);  // throws for 1 + x <= 0
    for (std::uint64_t n = 1; n <= n_max; ++n) values[n - 1] = std::exp(base - log_gamma_ratio(n, x));
}

}  // namespace rwalk
