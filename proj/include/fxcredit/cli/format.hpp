#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fxcredit::cli {

/// 12 significant digits, fixed notation, never "-0".
std::string format_number(double x);

std::string_view trim(std::string_view s);

/// Split on commas and trim each field. No quoting.
std::vector<std::string> split_fields(std::string_view line, char sep = ',');

/// Strict decimal parse of a whole (trimmed) field; nullopt-like failure via bool.
bool parse_double(std::string_view text, double& value);

bool parse_uint64(std::string_view text, unsigned long long& value);

} // namespace fxcredit::cli
