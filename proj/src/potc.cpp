#include "phm/potc.hpp"

#include <cmath>
#include <limits>

#include "phm/format.hpp"

namespace phm::potc {

namespace {

template <class Unit>
std::pair<double, Unit> parse_quantity(std::string_view text,
                                       std::initializer_list<std::pair<std::string_view, Unit>> units,
                                       const char* what) {
  // Longest suffix first so "kmh" wins over "h".
  std::pair<std::string_view, Unit> best{};
  bool found = false;
  for (const auto& u : units) {
    if (text.size() > u.first.size() && text.ends_with(u.first) &&
        (!found || u.first.size() > best.first.size())) {
      best = u;
      found = true;
    }
  }
  double value = 0.0;
  if (!found || !parse_double(text.substr(0, text.size() - best.first.size()), value) ||
      !std::isfinite(value) || value < 0.0) {
    throw ValidationError(what, "cannot parse " + std::string(what) + " '" + std::string(text) + "'");
  }
  return {value, best.second};
}

double to_meters(const Distance& d) {
  return d.unit == DistanceUnit::kKilometer ? d.value * 1000.0 : d.value;
}

double to_meters_per_second(const Speed& s) {
  return s.unit == SpeedUnit::kKilometerPerHour ? s.value * 1000.0 / 3600.0 : s.value;
}

void check_non_negative(double v, const char* field) {
  if (!std::isfinite(v) || v < 0.0) throw ValidationError(field, "must be finite and non-negative");
}

}  // namespace

std::string_view to_string(DistanceUnit unit) { return unit == DistanceUnit::kMeter ? "m" : "km"; }
std::string_view to_string(DurationUnit unit) { return unit == DurationUnit::kSecond ? "s" : "h"; }
std::string_view to_string(SpeedUnit unit) {
  return unit == SpeedUnit::kMeterPerSecond ? "m/s" : "km/h";
}

DistanceUnit parse_distance_unit(std::string_view text) {
  if (text == "m") return DistanceUnit::kMeter;
  if (text == "km") return DistanceUnit::kKilometer;
  throw ValidationError("unit", "unknown distance unit '" + std::string(text) + "'");
}

DurationUnit parse_duration_unit(std::string_view text) {
  if (text == "s") return DurationUnit::kSecond;
  if (text == "h") return DurationUnit::kHour;
  throw ValidationError("unit", "unknown duration unit '" + std::string(text) + "'");
}

SpeedUnit parse_speed_unit(std::string_view text) {
  if (text == "m/s" || text == "mps") return SpeedUnit::kMeterPerSecond;
  if (text == "km/h" || text == "kmh") return SpeedUnit::kKilometerPerHour;
  throw ValidationError("unit", "unknown speed unit '" + std::string(text) + "'");
}

Distance parse_distance(std::string_view text) {
  auto [v, u] = parse_quantity<DistanceUnit>(
      text, {{"m", DistanceUnit::kMeter}, {"km", DistanceUnit::kKilometer}}, "distance");
  return {v, u};
}

Duration parse_duration(std::string_view text) {
  auto [v, u] = parse_quantity<DurationUnit>(
      text, {{"s", DurationUnit::kSecond}, {"h", DurationUnit::kHour}}, "duration");
  return {v, u};
}

Speed parse_speed(std::string_view text) {
  auto [v, u] = parse_quantity<SpeedUnit>(text,
                                          {{"m/s", SpeedUnit::kMeterPerSecond},
                                           {"mps", SpeedUnit::kMeterPerSecond},
                                           {"km/h", SpeedUnit::kKilometerPerHour},
                                           {"kmh", SpeedUnit::kKilometerPerHour}},
                                          "speed");
  return {v, u};
}

double task_duration(const TaskSpec& spec) {
  if (spec.distance.has_value() == spec.duration.has_value()) {
    throw ValidationError("task", "exactly one of distance and duration (task_time) must be given");
  }
  if (spec.duration) {
    check_non_negative(spec.duration->value, "duration");
    return spec.duration->unit == DurationUnit::kHour ? spec.duration->value
                                                      : spec.duration->value / 3600.0;
  }
  const Distance& d = *spec.distance;
  check_non_negative(d.value, "distance");
  if (!spec.speed) throw ValidationError("speed", "speed is required when a distance is given");
  check_non_negative(spec.speed->value, "speed");
  if (d.value == 0.0) return 0.0;
  if (spec.speed->value == 0.0) {
    throw ValidationError("speed", "zero speed with a positive distance never completes");
  }
  if (d.unit == DistanceUnit::kKilometer && spec.speed->unit == SpeedUnit::kKilometerPerHour) {
    return d.value / spec.speed->value;
  }
  return to_meters(d) / to_meters_per_second(*spec.speed) / 3600.0;
}

std::optional<double> task_distance_m(const TaskSpec& spec) {
  if (spec.distance) return to_meters(*spec.distance);
  if (spec.duration && spec.speed) {
    return to_meters_per_second(*spec.speed) * task_duration(spec) * 3600.0;
  }
  return std::nullopt;
}

double conditional_reliability(const rbd::BlockExpr& expr, double start, double duration) {
  if (!std::isfinite(start) || start < 0.0) throw DomainError("elapsed time must be >= 0");
  if (!std::isfinite(duration) || duration < 0.0) throw DomainError("duration must be >= 0");
  const double at_start = rbd::system_log_reliability(expr, start);
  if (at_start <= std::log(rbd::kFailedReliability)) {
    throw SystemFailedError("cannot predict, system failed (R(" + format_number(start) +
                            ") <= 1e-12)");
  }
  if (duration == 0.0) return 1.0;
  if (auto rate = rbd::series_exponential_rate(expr)) return std::exp(-*rate * duration);
  return std::exp(rbd::system_log_reliability(expr, start + duration) - at_start);
}

Prediction predict_potc(const rbd::BlockExpr& expr, double elapsed, const TaskSpec& spec) {
  const double hours = task_duration(spec);
  return {conditional_reliability(expr, elapsed, hours), hours};
}

double actual_potc(const rbd::BlockExpr& expr, double elapsed_at_start, double measured_duration) {
  return conditional_reliability(expr, elapsed_at_start, measured_duration);
}

double rul(const rbd::BlockExpr& expr, double elapsed, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("threshold", "RUL threshold must lie in (0, 1)");
  }
  if (!std::isfinite(elapsed) || elapsed < 0.0) throw DomainError("elapsed time must be >= 0");
  const double base = rbd::system_log_reliability(expr, elapsed);
  if (base <= std::log(rbd::kFailedReliability)) {
    throw SystemFailedError("cannot estimate RUL, system failed");
  }
  const double target = std::log(threshold);
  auto excess = [&](double delta) {
    return rbd::system_log_reliability(expr, elapsed + delta) - base - target;
  };
  constexpr double kHorizon = 1e9;
  double lo = 0.0;
  double hi = 1e-3;
  while (excess(hi) > 0.0) {
    lo = hi;
    if (hi >= kHorizon) return std::numeric_limits<double>::infinity();
    hi = std::min(hi * 2.0, kHorizon);
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace phm::potc
