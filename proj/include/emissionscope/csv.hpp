#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emissionscope::csv {

/// Reads one line, stripping a trailing '\r'. Returns false at end of input.
bool read_line(std::istream& in, std::string& line);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Strict decimal parse: the whole field must be consumed and the value finite.
std::optional<double> parse_double(std::string_view field) noexcept;

/// Shortest representation that parses back to the identical double.
std::string format_exact(double value);

/// Fixed six-significant-digit rendering used in reports.
std::string format_sig6(double value);

}  // namespace emissionscope::csv
