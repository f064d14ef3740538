// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace nfmimo {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

std::string trim(const std::string& s);
std::vector<std::string> split(const std::string& s, char sep);

/// Parses "1,2,5", "lin:a:b:n" (inclusive linear grid) or "log:a:b:n"
/// (inclusive log10-spaced grid).
std::vector<double> parse_value_list(const std::string& text);

}  // namespace nfmimo
