#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small helpers for the line-oriented text formats.
namespace spinprobe::text {

/// Split on ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view line);
/// Split on a single delimiter, trimming whitespace around each field.
std::vector<std::string_view> split(std::string_view line, char delim);
std::string_view trim(std::string_view s);
/// Drop everything from the first '#'.
std::string_view strip_comment(std::string_view line);

/// Whole-token parse; nullopt on junk.  Accepts "nan"/"inf".
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

/// Shortest decimal that round-trips exactly.
std::string format_exact(double v);
/// Decimal with `digits` significant digits (%.Ng); nan and inf as "nan", "inf", "-inf".
std::string format_sig(double v, int digits = 9);

}  // namespace spinprobe::text
