#pragma once

#include <string>
#include <string_view>

namespace phm {

enum class RateUnit { kPerHour, kPerMillionHours };

std::string_view to_string(RateUnit unit);
/// Accepts "per_hour" / "per_million_hours" (plus the aliases "/h" and "/1e6h").
RateUnit parse_rate_unit(std::string_view text);

/// A non-negative, finite failure rate tagged with its unit.
///
/// The value is held as magnitude * 10^exponent, where the exponent only
/// moves when the unit changes. Converting per-hour <-> per-million-hours is
/// therefore a pure exponent shift and a round trip restores the original
/// value bit for bit. Engine internals work in per-hour (`per_hour()`).
class FailureRate {
 public:
  constexpr FailureRate() = default;
  FailureRate(double value, RateUnit unit);

  static FailureRate hourly(double value) { return {value, RateUnit::kPerHour}; }
  static FailureRate per_million_hours(double value) {
    return {value, RateUnit::kPerMillionHours};
  }

  /// Value expressed in `unit()`.
  double value() const;
  RateUnit unit() const { return unit_; }
  /// Value expressed in failures per hour.
  double per_hour() const;

  FailureRate converted(RateUnit target) const;
  /// Same unit, magnitude multiplied by `factor` (factor >= 0).
  FailureRate scaled(double factor) const;

  friend bool operator==(const FailureRate& a, const FailureRate& b) {
    return a.unit_ == b.unit_ && a.value() == b.value();
  }

 private:
  double magnitude_ = 0.0;
  int exponent_ = 0;
  RateUnit unit_ = RateUnit::kPerHour;
};

/// Exact conversion between the two supported units; identity when they match.
FailureRate convert_rate(const FailureRate& rate, RateUnit target);

std::string to_string(const FailureRate& rate);

}  // namespace phm
