#include "phm/failure_rate.hpp"

#include <cmath>

#include "phm/error.hpp"
#include "phm/format.hpp"

namespace phm {

namespace {

// 10^k for |k| <= 22 is exactly representable; dividing by the power keeps
// the result correctly rounded for negative shifts.
double shift10(double magnitude, int exponent) {
  if (exponent == 0) return magnitude;
  double power = 1.0;
  for (int i = 0; i < std::abs(exponent); ++i) power *= 10.0;
  return exponent > 0 ? magnitude * power : magnitude / power;
}

int unit_exponent(RateUnit unit) { return unit == RateUnit::kPerHour ? 0 : 6; }

}  // namespace

std::string_view to_string(RateUnit unit) {
  return unit == RateUnit::kPerHour ? "per_hour" : "per_million_hours";
}

RateUnit parse_rate_unit(std::string_view text) {
  if (text == "per_hour" || text == "/h") return RateUnit::kPerHour;
  if (text == "per_million_hours" || text == "/1e6h") return RateUnit::kPerMillionHours;
  throw ValidationError("", "unknown rate unit '" + std::string(text) + "'");
}

FailureRate::FailureRate(double value, RateUnit unit) : magnitude_(value), unit_(unit) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("", "failure rate must be finite and non-negative, got " +
                                  format_number(value));
  }
}

double FailureRate::value() const { return shift10(magnitude_, exponent_); }

double FailureRate::per_hour() const {
  return shift10(magnitude_, exponent_ - unit_exponent(unit_));
}

FailureRate FailureRate::converted(RateUnit target) const {
  FailureRate out = *this;
  out.exponent_ += unit_exponent(target) - unit_exponent(unit_);
  out.unit_ = target;
  return out;
}

FailureRate FailureRate::scaled(double factor) const {
  if (!std::isfinite(factor) || factor < 0.0) {
    throw ValidationError("", "rate multiplier must be finite and non-negative");
  }
  FailureRate out = *this;
  out.magnitude_ *= factor;
  return out;
}

FailureRate convert_rate(const FailureRate& rate, RateUnit target) {
  return rate.converted(target);
}

std::string to_string(const FailureRate& rate) {
  return format_number(rate.value()) + " " + std::string(to_string(rate.unit()));
}

}  // namespace phm
