#include "rwalk/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rwalk {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), end);
}

namespace {

double parse_plain(std::string_view text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

double parse_double(std::string_view text) {
    text = trim(text);
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = parse_plain(trim(text.substr(0, slash)));
        const double den = parse_plain(trim(text.substr(slash + 1)));
        if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    return parse_plain(text);
}

}  // namespace rwalk
