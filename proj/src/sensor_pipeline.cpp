#include "phm/sensor_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "phm/format.hpp"

namespace phm::sensor {

MappingCurve::MappingCurve(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  std::vector<Diagnostic> problems;
  if (knots_.empty()) problems.push_back({"curve", "needs at least one knot"});
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    const auto& [x, m] = knots_[i];
    const std::string path = "curve[" + std::to_string(i) + "]";
    if (!std::isfinite(x)) problems.push_back({path, "reading must be finite"});
    if (!std::isfinite(m) || m <= 0.0) problems.push_back({path, "multiplier must be positive"});
    if (i > 0 && !(x > knots_[i - 1].first)) {
      problems.push_back({path, "readings must be strictly increasing"});
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
}

double MappingCurve::operator()(double reading) const {
  if (reading <= knots_.front().first) return knots_.front().second;
  if (reading >= knots_.back().first) return knots_.back().second;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), reading,
                             [](double r, const auto& k) { return r < k.first; });
  auto lo = std::prev(hi);
  const double w = (reading - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

std::vector<Diagnostic> validate_binding(const store::RobotModel& model,
                                         const SensorBinding& binding) {
  std::vector<Diagnostic> out;
  if (binding.sensor_id.empty()) out.push_back({"sensor_id", "must not be empty"});
  const store::ComponentSpec* spec = model.find(binding.target_path);
  if (!spec) {
    out.push_back({"target_path", "unresolved component '" + binding.target_path + "'"});
  } else if (!store::accepts_factor(*spec, binding.target_factor)) {
    out.push_back({"target_factor", "factor '" + binding.target_factor + "' does not apply to " +
                                        store::kind_name(spec->params) + " component '" +
                                        binding.target_path + "'"});
  }
  return out;
}

Pipeline::Pipeline(std::shared_ptr<const store::RobotModel> model)
    : model_(std::move(model)), nominal_(store::build_block(*model_)) {}

const rbd::BlockExpr& Pipeline::sensor_tree() {
  if (!sensor_cache_) {
    auto overrides = active_overrides();
    sensor_cache_ = overrides.empty() ? nominal_ : store::build_block(*model_, overrides);
  }
  return *sensor_cache_;
}

void Pipeline::bind(const SensorBinding& binding) {
  auto problems = validate_binding(*model_, binding);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (std::find(bindings_.begin(), bindings_.end(), binding) != bindings_.end()) return;
  bindings_.push_back(binding);
  multipliers_.emplace_back();
}

void Pipeline::clear_bindings() {
  bindings_.clear();
  multipliers_.clear();
  sensor_cache_.reset();
}

void Pipeline::apply(const SensorReading& reading) {
  bool bound = false;
  for (const auto& b : bindings_) bound = bound || b.sensor_id == reading.sensor_id;
  if (!bound) {
    ++counters_.ignored_unbound;
    return;
  }
  if (!std::isfinite(reading.value) || !std::isfinite(reading.timestamp)) {
    ++counters_.rejected_non_finite;
    return;
  }
  auto [it, fresh] = last_timestamp_.try_emplace(reading.sensor_id, reading.timestamp);
  if (!fresh) {
    if (reading.timestamp < it->second) {
      ++counters_.dropped_out_of_order;
      return;
    }
    it->second = reading.timestamp;
  }
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (bindings_[i].sensor_id != reading.sensor_id) continue;
    const double m = bindings_[i].curve(reading.value);
    if (multipliers_[i] != m) {
      multipliers_[i] = m;
      sensor_cache_.reset();
    }
  }
  ++counters_.applied;
}

store::FactorOverrides Pipeline::active_overrides() const {
  store::FactorOverrides out;
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    if (!multipliers_[i]) continue;
    auto [it, fresh] = out[bindings_[i].target_path].try_emplace(bindings_[i].target_factor,
                                                                *multipliers_[i]);
    if (!fresh) it->second *= *multipliers_[i];
  }
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// R and h of one tree; hazard is NaN once the system has failed.
std::pair<double, double> evaluate(const rbd::BlockExpr& tree, double t, bool& failed) {
  const double r = rbd::system_reliability(tree, t);
  try {
    return {rbd::system_hazard(tree, t), r};
  } catch (const SystemFailedError&) {
    failed = true;
    return {kNaN, r};
  }
}

std::optional<double> task_potc(const rbd::BlockExpr& tree, double t, const potc::TaskSpec* task) {
  if (!task) return std::nullopt;
  try {
    return potc::predict_potc(tree, t, *task).potc;
  } catch (const SystemFailedError&) {
    return std::nullopt;
  }
}

}  // namespace

AnalysisSnapshot Pipeline::snapshot(double t, const potc::TaskSpec* active_task) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("snapshot time must be finite and >= 0");
  if (last_t_ && t < *last_t_) {
    throw DomainError("snapshot time " + format_number(t) + " precedes the previous snapshot");
  }
  last_t_ = t;
  AnalysisSnapshot s;
  s.t = t;
  std::tie(s.nominal_lambda, s.nominal_r) = evaluate(nominal_, t, s.failed);
  s.potc_nominal = task_potc(nominal_, t, active_task);
  const rbd::BlockExpr& sensed = sensor_tree();
  if (&sensed == &nominal_ || active_overrides().empty()) {
    s.sensor_lambda = s.nominal_lambda;
    s.sensor_r = s.nominal_r;
    s.potc_sensor = s.potc_nominal;
  } else {
    std::tie(s.sensor_lambda, s.sensor_r) = evaluate(sensed, t, s.failed);
    s.potc_sensor = task_potc(sensed, t, active_task);
  }
  return s;
}

std::vector<AnalysisSnapshot> smooth(const std::vector<AnalysisSnapshot>& series,
                                     std::size_t window) {
  if (window == 0) throw ValidationError("window", "smoothing window must be >= 1");
  if (window == 1) return series;
  const std::size_t left = (window - 1) / 2;
  const std::size_t right = window / 2;
  const std::size_t n = series.size();
  std::vector<AnalysisSnapshot> out = series;
  auto average = [&](std::size_t i, auto field) {
    const std::size_t a = i >= left ? i - left : 0;
    const std::size_t b = std::min(n - 1, i + right);
    double sum = 0.0;
    for (std::size_t j = a; j <= b; ++j) sum += field(series[j]);
    return sum / static_cast<double>(b - a + 1);
  };
  auto average_opt = [&](std::size_t i, auto field) -> std::optional<double> {
    if (!field(series[i])) return std::nullopt;
    const std::size_t a = i >= left ? i - left : 0;
    const std::size_t b = std::min(n - 1, i + right);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = a; j <= b; ++j) {
      if (auto v = field(series[j])) {
        sum += *v;
        ++count;
      }
    }
    return sum / static_cast<double>(count);
  };
  for (std::size_t i = 0; i < n; ++i) {
    out[i].nominal_lambda = average(i, [](const auto& s) { return s.nominal_lambda; });
    out[i].nominal_r = average(i, [](const auto& s) { return s.nominal_r; });
    out[i].sensor_lambda = average(i, [](const auto& s) { return s.sensor_lambda; });
    out[i].sensor_r = average(i, [](const auto& s) { return s.sensor_r; });
    out[i].potc_nominal = average_opt(i, [](const auto& s) { return s.potc_nominal; });
    out[i].potc_sensor = average_opt(i, [](const auto& s) { return s.potc_sensor; });
  }
  return out;
}

double tick_hours(const ReplayConfig& config, std::size_t k) {
  return config.start_hours +
         static_cast<double>(k) * config.tick_period_s * config.time_scale / 3600.0;
}

std::vector<AnalysisSnapshot> replay(std::shared_ptr<const store::RobotModel> model,
                                     const std::vector<SensorBinding>& bindings,
                                     const std::vector<SensorReading>& log,
                                     const ReplayConfig& config) {
  if (!(config.tick_period_s > 0.0) || !std::isfinite(config.tick_period_s)) {
    throw ValidationError("tick_period", "tick period must be positive");
  }
  if (!(config.time_scale > 0.0) || !std::isfinite(config.time_scale)) {
    throw ValidationError("time_scale", "time scale must be positive");
  }
  if (config.window == 0) throw ValidationError("window", "smoothing window must be >= 1");

  Pipeline pipeline(std::move(model));
  for (const auto& b : bindings) pipeline.bind(b);

  const double t0 = log.empty() ? 0.0 : log.front().timestamp;
  std::size_t ticks = 1;
  if (config.ticks) {
    ticks = *config.ticks;
  } else if (!log.empty()) {
    double last = t0;
    for (const auto& r : log) {
      if (std::isfinite(r.timestamp)) last = std::max(last, r.timestamp);
    }
    ticks = static_cast<std::size_t>(std::ceil((last - t0) / config.tick_period_s)) + 1;
  }

  const potc::TaskSpec* task = config.task ? &*config.task : nullptr;
  std::vector<AnalysisSnapshot> out;
  out.reserve(ticks);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < ticks; ++k) {
    const double now = t0 + static_cast<double>(k) * config.tick_period_s;
    // Non-finite timestamps never block the cursor; the pipeline rejects them.
    while (cursor < log.size() &&
           (!std::isfinite(log[cursor].timestamp) || log[cursor].timestamp <= now)) {
      pipeline.apply(log[cursor++]);
    }
    out.push_back(pipeline.snapshot(tick_hours(config, k), task));
  }
  return smooth(out, config.window);
}

namespace {

std::string field(double v) { return std::isfinite(v) ? format_number(v) : std::string(); }
std::string field(const std::optional<double>& v) { return v ? field(*v) : std::string(); }

}  // namespace

std::string snapshot_csv_row(const AnalysisSnapshot& s) {
  std::string row;
  row += field(s.t) + ',' + field(s.nominal_lambda) + ',' + field(s.nominal_r) + ',';
  row += field(s.sensor_lambda) + ',' + field(s.sensor_r) + ',';
  row += field(s.potc_nominal) + ',' + field(s.potc_sensor) + ',';
  row += s.failed ? "1" : "0";
  return row;
}

std::string snapshots_csv(const std::vector<AnalysisSnapshot>& series) {
  std::string out =
      "t_hours,nominal_lambda,nominal_R,sensor_lambda,sensor_R,potc_nominal,potc_sensor,failed\n";
  for (const auto& s : series) out += snapshot_csv_row(s) + '\n';
  return out;
}

}  // namespace phm::sensor
