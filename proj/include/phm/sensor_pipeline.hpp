#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phm/model.hpp"
#include "phm/potc.hpp"
#include "phm/rbd.hpp"

namespace phm::sensor {

/// Piecewise-linear reading -> multiplier map, clamped to the end knots.
class MappingCurve {
 public:
  MappingCurve() : knots_{{0.0, 1.0}} {}
  /// Knots must be strictly increasing in reading with positive, finite
  /// multipliers; at least one knot.
  explicit MappingCurve(std::vector<std::pair<double, double>> knots);

  double operator()(double reading) const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  bool operator==(const MappingCurve&) const = default;

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct SensorBinding {
  std::string sensor_id;
  std::string target_path;
  std::string target_factor;
  MappingCurve curve;

  bool operator==(const SensorBinding&) const = default;
};

struct SensorReading {
  std::string sensor_id;
  double timestamp = 0.0;  // seconds, monotonic per sensor
  double value = 0.0;
  std::string unit;

  bool operator==(const SensorReading&) const = default;
};

/// One analysis tick: nominal values from the static model, sensor values
/// from the model with every active multiplier applied.
struct AnalysisSnapshot {
  double t = 0.0;  // elapsed usage hours
  double nominal_lambda = 0.0;
  double nominal_r = 1.0;
  double sensor_lambda = 0.0;
  double sensor_r = 1.0;
  std::optional<double> potc_nominal;
  std::optional<double> potc_sensor;
  bool failed = false;

  bool operator==(const AnalysisSnapshot&) const = default;
};

struct PipelineCounters {
  std::uint64_t applied = 0;
  std::uint64_t ignored_unbound = 0;
  std::uint64_t rejected_non_finite = 0;
  std::uint64_t dropped_out_of_order = 0;

  bool operator==(const PipelineCounters&) const = default;
};

/// Checks `binding` against `model`: path resolves and the factor can be
/// scaled on that component kind.
std::vector<Diagnostic> validate_binding(const store::RobotModel& model,
                                         const SensorBinding& binding);

/// Pipeline state. Not thread-safe: one writer owns it (see the service's
/// single-writer executor).
class Pipeline {
 public:
  explicit Pipeline(std::shared_ptr<const store::RobotModel> model);

  const store::RobotModel& model() const { return *model_; }
  const rbd::BlockExpr& nominal_tree() const { return nominal_; }
  /// Tree with the current multipliers applied.
  const rbd::BlockExpr& sensor_tree();

  /// Registers a binding; re-binding an identical binding is a no-op.
  /// Throws ValidationError when the binding does not fit the model.
  void bind(const SensorBinding& binding);
  /// Removes every binding and override.
  void clear_bindings();
  const std::vector<SensorBinding>& bindings() const { return bindings_; }

  void apply(const SensorReading& reading);

  /// Current multiplier per binding index; unset until the first reading.
  const std::vector<std::optional<double>>& multipliers() const { return multipliers_; }
  store::FactorOverrides active_overrides() const;

  /// Throws DomainError if t precedes the previous snapshot.
  AnalysisSnapshot snapshot(double t, const potc::TaskSpec* active_task = nullptr);

  const PipelineCounters& counters() const { return counters_; }

 private:
  std::shared_ptr<const store::RobotModel> model_;
  rbd::BlockExpr nominal_;
  std::vector<SensorBinding> bindings_;
  std::vector<std::optional<double>> multipliers_;
  std::map<std::string, double> last_timestamp_;
  std::optional<rbd::BlockExpr> sensor_cache_;
  std::optional<double> last_t_;
  PipelineCounters counters_;
};

/// Centered moving average of every value field (t is left as is) with
/// truncation at the edges. window == 1 is the identity.
std::vector<AnalysisSnapshot> smooth(const std::vector<AnalysisSnapshot>& series,
                                     std::size_t window);

struct ReplayConfig {
  double tick_period_s = 1.0;
  /// Usage hours per wall-clock hour.
  double time_scale = 1.0;
  double start_hours = 0.0;
  /// Number of ticks; by default enough to cover the whole log.
  std::optional<std::size_t> ticks;
  std::size_t window = 1;
  std::optional<potc::TaskSpec> task;
};

/// Deterministic replay of a reading log. Tick k happens at
/// t0 + k * tick_period_s seconds of log time (t0 = first timestamp); every
/// reading with timestamp <= that instant is applied before the snapshot,
/// which is taken at start_hours + k * tick_period_s * time_scale / 3600.
std::vector<AnalysisSnapshot> replay(std::shared_ptr<const store::RobotModel> model,
                                     const std::vector<SensorBinding>& bindings,
                                     const std::vector<SensorReading>& log,
                                     const ReplayConfig& config);

/// Usage hours of tick k.
double tick_hours(const ReplayConfig& config, std::size_t k);

/// Snapshot table header plus one formatted row per snapshot.
std::string snapshots_csv(const std::vector<AnalysisSnapshot>& series);
std::string snapshot_csv_row(const AnalysisSnapshot& s);

}  // namespace phm::sensor
