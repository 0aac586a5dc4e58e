#include "phm/format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace phm {

namespace {

std::string non_finite(double value) {
  if (std::isnan(value)) return "nan";
  return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_number(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::scientific, 8);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

std::string format_shortest(double value) {
  if (!std::isfinite(value)) return non_finite(value);
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
  return std::string(buf, ec == std::errc{} ? end : buf);
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace phm
