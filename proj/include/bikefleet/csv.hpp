#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bikefleet::csv {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
/// A trailing '\r' is ignored.
std::vector<std::string> split_record(std::string_view line);

/// Reads the next non-empty line; false at end of stream.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line_no);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

/// Fixed-notation, locale-independent formatting.
std::string format_fixed(double value, int precision);

/// Shortest round-trip formatting.
std::string format_shortest(double value);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

}  // namespace bikefleet::csv
