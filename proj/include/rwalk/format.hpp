#pragma once

#include <string>
#include <string_view>

namespace rwalk {

/// Shortest decimal string that parses back to the same double ("inf", "-inf", "nan"
/// for non-finite values). Locale independent.
std::string format_double(double value);

/// Parses a decimal or a fraction "a/b". Throws std::invalid_argument.
double parse_double(std::string_view text);

}  // namespace rwalk
