#include "rwalk/types.hpp"

#include <stdexcept>

namespace rwalk {

std::string to_string(Sign sign) { return sign == Sign::Positive ? "positive" : "negative"; }

std::string to_string(Truncation rule) {
    switch (rule) {
        case Truncation::Sqrt: return "sqrt";
        case Truncation::Linear: return "linear";
        case Truncation::None: break;
    }
    return "none";
}

Sign parse_sign(std::string_view text) {
    if (text == "positive" || text == "pos" || text == "+") return Sign::Positive;
    if (text == "negative" || text == "neg" || text == "-") return Sign::Negative;
    throw std::invalid_argument("unknown sign '" + std::string(text) + "' (positive|negative)");
}

Truncation parse_truncation(std::string_view text) {
    if (text == "none") return Truncation::None;
    if (text == "sqrt") return Truncation::Sqrt;
    if (text == "linear") return Truncation::Linear;
    throw std::invalid_argument("unknown truncation '" + std::string(text) + "' (none|sqrt|linear)");
}

}  // namespace rwalk
