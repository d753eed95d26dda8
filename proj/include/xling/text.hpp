#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace xling {

/// Splits on runs of spaces, tabs and carriage returns; no empty fields.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// Splits on a single delimiter; keeps empty fields.
std::vector<std::string_view> split(std::string_view line, char delim);

std::string_view trim(std::string_view s);

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

/// Shortest text that reads back to exactly the same double.
std::string format_double(double v);

/// Fixed-point formatting with `digits` decimals.
std::string format_fixed(double v, int digits);

}  // namespace xling
