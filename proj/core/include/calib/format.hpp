#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace calib {

// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

// Presentation-layer rounding: nearest integer, halves away from zero.
long long display_points(double points);

// RFC 3339 UTC timestamp with millisecond precision, e.g. 2024-05-01T12:00:00.000Z.
std::string format_rfc3339(std::chrono::system_clock::time_point tp);

// Left-aligned columns separated by two spaces, header underlined with dashes.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

}  // namespace calib
