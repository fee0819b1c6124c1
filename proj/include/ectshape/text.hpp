#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ectshape::text {

/// 17 significant digits, shortest general form; parses back bit-exactly.
std::string format_double(double value);

/// Whole-token parse in the C locale. Accepts decimal and scientific
/// notation plus "nan"/"inf" (callers decide whether those are allowed).
std::optional<double> parse_double(std::string_view token);
std::optional<long long> parse_int(std::string_view token);

std::string_view trim(std::string_view s);

/// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> split_lines(std::string_view text);

/// Splits on any run of whitespace and/or commas; empty fields vanish.
std::vector<std::string_view> split_fields(std::string_view line);

/// Splits on runs of blanks and tabs only.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string_view> split_on(std::string_view line, char delim);

bool is_comment_or_blank(std::string_view line);

/// Prefixes every line of `body` with "# ". Empty body yields "".
std::string comment_block(std::string_view body);

}  // namespace ectshape::text
