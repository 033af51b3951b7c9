#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

namespace rwalk {

/// Positive: repeated steps copy a past step. Negative: they copy its negation.
enum class Sign { Positive, Negative };

/// Truncation level t_n applied to fresh innovations: none (t_n = inf), sqrt(n) or n.
enum class Truncation { None, Sqrt, Linear };

inline double truncation_level(Truncation rule, std::uint64_t n) noexcept {
    switch (rule) {
        case Truncation::Sqrt: return std::sqrt(static_cast<double>(n));
        case Truncation::Linear: return static_cast<double>(n);
        case Truncation::None: break;
    }
    return std::numeric_limits<double>::infinity();
}

/// |x| <= t_n, evaluated without rounding sqrt(n).
inline bool within_truncation(double x, Truncation rule, std::uint64_t n) noexcept {
    switch (rule) {
        case Truncation::Sqrt: return x * x <= static_cast<double>(n);
        case Truncation::Linear: return std::fabs(x) <= static_cast<double>(n);
        case Truncation::None: break;
    }
    return true;
}

/// Z_n = X_n 1{|X_n| <= t_n}.
inline double truncate(double x, Truncation rule, std::uint64_t n) noexcept {
    return within_truncation(x, rule, n) ? x : 0.0;
}

std::string to_string(Sign sign);
std::string to_string(Truncation rule);
Sign parse_sign(std::string_view text);
Truncation parse_truncation(std::string_view text);

}  // namespace rwalk
