#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small token helpers shared by the .inp and .cpa readers.
namespace inp2cpa::text {

std::string_view trim(std::string_view s);
std::vector<std::string> split_ws(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_upper(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

// Strict decimal parse (optional sign, fraction, exponent); nullopt on any
// trailing garbage or non-finite result.
std::optional<double> parse_number(std::string_view token);

// Shortest text that parses back to the same double.
std::string format_number(double value);

// Splits into lines, dropping a trailing '\r' from each.
std::vector<std::string_view> lines(std::string_view text);

}  // namespace inp2cpa::text
