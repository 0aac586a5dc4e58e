#pragma once

#include <string>
#include <string_view>

namespace phm {

/// Scientific notation with 9 significant digits ("1.00000000e+00").
/// Locale-independent; used for every number the CLI and CSV outputs print.
std::string format_number(double value);

/// Shortest scientific form that round-trips to the same double ("9.36e-06").
std::string format_shortest(double value);

/// Strict locale-independent parse of a whole string as a double.
/// Returns false on trailing garbage or overflow.
bool parse_double(std::string_view text, double& out);

}  // namespace phm
