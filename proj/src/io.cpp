// SPDX-License-Identifier: Apache-2.0
#include "nfmimo/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace nfmimo {

std::string format_double(double v) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
    if (result.ec != std::errc()) throw std::runtime_error("failed to format double");
    return std::string(buffer, result.ptr);
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

namespace {

double parse_double(const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("not a number: '" + text + "'");
}

std::vector<double> grid(const std::string& text, bool log_spaced) {
    const auto parts = split(text, ':');
    if (parts.size() != 4)
        throw std::invalid_argument("grid syntax is lin:lo:hi:n or log:lo:hi:n");
    const double lo = parse_double(parts[1]);
    const double hi = parse_double(parts[2]);
    const int n = static_cast<int>(parse_double(parts[3]));
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    if (log_spaced && (lo <= 0.0 || hi <= 0.0))
        throw std::invalid_argument("log grid endpoints must be positive");

    std::vector<double> values;
    values.reserve(n);
    if (n == 1) {
        values.push_back(lo);
        return values;
    }
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / double(n - 1);
        values.push_back(log_spaced ? std::pow(10.0, std::lerp(std::log10(lo), std::log10(hi), t))
                                    : std::lerp(lo, hi, t));
    }
    return values;
}

}  // namespace

std::vector<double> parse_value_list(const std::string& text) {
    const std::string trimmed = trim(text);
    if (trimmed.rfind("log:", 0) == 0) return grid(trimmed, true);
    if (trimmed.rfind("lin:", 0) == 0) return grid(trimmed, false);
    std::vector<double> values;
    for (const auto& part : split(trimmed, ',')) {
        const std::string p = trim(part);
        if (!p.empty()) values.push_back(parse_double(p));
    }
    if (values.empty()) throw std::invalid_argument("empty value list");
    return values;
}

}  // namespace nfmimo
