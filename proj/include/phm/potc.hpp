#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phm/rbd.hpp"

namespace phm::potc {

enum class DistanceUnit { kMeter, kKilometer };
enum class DurationUnit { kSecond, kHour };
enum class SpeedUnit { kMeterPerSecond, kKilometerPerHour };

struct Distance {
  double value = 0.0;
  DistanceUnit unit = DistanceUnit::kMeter;
  bool operator==(const Distance&) const = default;
};

struct Duration {
  double value = 0.0;
  DurationUnit unit = DurationUnit::kHour;
  bool operator==(const Duration&) const = default;
};

struct Speed {
  double value = 0.0;
  SpeedUnit unit = SpeedUnit::kMeterPerSecond;
  bool operator==(const Speed&) const = default;
};

std::string_view to_string(DistanceUnit unit);
std::string_view to_string(DurationUnit unit);
std::string_view to_string(SpeedUnit unit);
DistanceUnit parse_distance_unit(std::string_view text);
DurationUnit parse_duration_unit(std::string_view text);
SpeedUnit parse_speed_unit(std::string_view text);

/// "3.6km", "3600m", "1800s", "1.5h", "3.6kmh", "1mps", "3.6km/h".
Distance parse_distance(std::string_view text);
Duration parse_duration(std::string_view text);
Speed parse_speed(std::string_view text);

/// A mission request. Exactly one of distance / duration is given; speed is
/// required with a distance. Waypoints are carried as opaque metadata.
struct TaskSpec {
  std::string task_id;
  std::optional<Distance> distance;
  std::optional<Duration> duration;
  std::optional<Speed> speed;
  std::vector<std::vector<double>> waypoints;

  bool operator==(const TaskSpec&) const = default;
};

/// Mission duration in hours. Throws ValidationError for an inconsistent
/// spec or a zero speed with a positive distance.
double task_duration(const TaskSpec& spec);

/// Planned distance in metres when it can be derived (given, or speed x
/// duration).
std::optional<double> task_distance_m(const TaskSpec& spec);

/// R(start + duration) / R(start): survival over the mission window given
/// survival up to its start. Throws SystemFailedError when R(start) <= 1e-12.
double conditional_reliability(const rbd::BlockExpr& expr, double start, double duration);

struct Prediction {
  double potc = 1.0;
  double duration_hours = 0.0;
};

Prediction predict_potc(const rbd::BlockExpr& expr, double elapsed, const TaskSpec& spec);

/// Same formula as the prediction, with the measured mission duration.
double actual_potc(const rbd::BlockExpr& expr, double elapsed_at_start, double measured_duration);

/// e^-1, the default conditional-reliability threshold for RUL.
inline constexpr double kDefaultRulThreshold = 0.36787944117144233;

/// Smallest delta >= 0 with R(elapsed + delta) / R(elapsed) <= threshold,
/// by bracketing and bisection. +infinity when the threshold is not crossed
/// within 1e9 hours.
double rul(const rbd::BlockExpr& expr, double elapsed, double threshold = kDefaultRulThreshold);

/// One entry of the task history (robot_task_list).
struct TaskRecord {
  TaskSpec spec;
  double elapsed_at_start = 0.0;
  double predicted_potc_nominal = 1.0;
  double predicted_potc_sensor = 1.0;
  double predicted_duration = 0.0;
  std::optional<double> predicted_distance;
  std::optional<double> actual_potc_nominal;
  std::optional<double> actual_potc_sensor;
  std::optional<double> actual_duration;
  std::optional<double> actual_distance;

  bool completed() const { return actual_duration.has_value(); }
  bool operator==(const TaskRecord&) const = default;
};

}  // namespace phm::potc
