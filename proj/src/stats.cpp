#include "rwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rwalk {

void Moments::add(double x) noexcept {
    Moments one;
    one.n_ = 1;
    one.mean_ = x;
    merge(one);
}

void Moments::merge(const Moments& o) noexcept {
    if (o.n_ == 0) return;
    if (n_ == 0) {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n_);
    const double nb = static_cast<double>(o.n_);
    const double n = na + nb;
    const double d = o.mean_ - mean_;
    const double d_n = d / n;
    const double d2 = d * d_n * na * nb;  // d^2 na nb / n

    const double m4 = m4_ + o.m4_ + d2 * d_n * d_n * (na * na - na * nb + nb * nb) +
                      6.0 * d_n * d_n * (na * na * o.m2_ + nb * nb * m2_) + 4.0 * d_n * (na * o.m3_ - nb * m3_);
    const double m3 = m3_ + o.m3_ + d2 * d_n * (na - nb) + 3.0 * d_n * (na * o.m2_ - nb * m2_);
    const double m2 = m2_ + o.m2_ + d2;

    n_ += o.n_;
    mean_ += d * nb / n;
    m2_ = m2;
    m3_ = m3;
    m4_ = m4;
}

double Moments::variance() const noexcept {
    return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1);
}

double Moments::mean_se() const noexcept {
    return n_ < 2 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double Moments::variance_se() const noexcept {
    if (n_ < 2) return 0.0;
    const double n = static_cast<double>(n_);
    const double s2 = m2_ / n;
    return std::sqrt(std::max(m4_ / n - s2 * s2, 0.0) / n);
}

double Moments::central(int k) const noexcept {
    if (n_ == 0) return 0.0;
    const double n = static_cast<double>(n_);
    switch (k) {
        case 2: return m2_ / n;
        case 3: return m3_ / n;
        case 4: return m4_ / n;
        default: return 0.0;
    }
}

namespace {

Moments merge_range(std::span<const Moments> parts) {
    if (parts.empty()) return {};
    if (parts.size() == 1) return parts[0];
    const auto half = parts.size() / 2;
    auto left = merge_range(parts.first(half));
    left.merge(merge_range(parts.subspan(half)));
    return left;
}

}  // namespace

Moments merge_pairwise(std::span<const Moments> parts) { return merge_range(parts); }

Moments moments_of(std::span<const double> values) {
    std::vector<Moments> singles(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) singles[i].add(values[i]);
    return merge_pairwise(singles);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) noexcept { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double kolmogorov_survival(double lambda) noexcept {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Jacobi-transformed series, fast for small lambda.
        const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
        double sum = 0.0;
        for (int k = 1; k <= 15; k += 2) sum += std::pow(y, k * k);
        return 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normal(std::span<const double> values, double mean, double variance) {
    if (values.empty()) throw std::invalid_argument("ks_normal: no data");
    if (!(variance > 0.0)) throw std::invalid_argument("ks_normal: variance must be positive");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double sd = std::sqrt(variance);
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = normal_cdf((sorted[i] - mean) / sd);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    const double root = std::sqrt(n);
    return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile: no data");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0,1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double sample_covariance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("sample_covariance: size mismatch");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
    return s / (n - 1.0);
}

}  // namespace rwalk
