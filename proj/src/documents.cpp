#include <cmath>
#include <limits>

#include "documents_json.hpp"
#include "phm/format.hpp"

namespace phm::store {

using detail::Document;
using detail::Json;
using detail::ObjectReader;

namespace {

constexpr const char* kBindingsSchema = "phm-bindings/1";
constexpr const char* kHistorySchema = "phm-task-history/1";

const Json& read_array(ObjectReader& r, const std::string& key) {
  const Json& v = r.get(key);
  if (!v.is_array()) r.fail(key, "expected an array, found " + detail::type_name(v));
  return v;
}

void check_schema(ObjectReader& r, const char* expected) {
  const std::string schema = r.string("schema");
  if (schema != expected) {
    r.fail("schema", "unsupported schema '" + schema + "', expected '" + expected + "'");
  }
}

sensor::SensorBinding read_binding(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  sensor::SensorBinding b;
  b.sensor_id = r.string("sensor_id");
  b.target_path = r.string("target_path");
  b.target_factor = r.string("target_factor");
  const Json& curve = read_array(r, "curve");
  r.finish();
  std::vector<std::pair<double, double>> knots;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const std::string kp = r.child("curve") + "/" + std::to_string(i);
    const Json& knot = curve[i];
    if (!knot.is_array() || knot.size() != 2) doc.fail(kp, "knot must be a [reading, multiplier] pair");
    knots.emplace_back(detail::as_number(doc, knot[0], kp + "/0"),
                       detail::as_number(doc, knot[1], kp + "/1"));
  }
  try {
    b.curve = sensor::MappingCurve(std::move(knots));
  } catch (const ValidationError& e) {
    r.fail("curve", e.diagnostics().front().path + ": " + e.diagnostics().front().message);
  }
  return b;
}

double read_reading_value(const Document& doc, const Json& v, const std::string& ptr) {
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    doc.fail(ptr, "expected a number, found string '" + s + "'");
  }
  if (!v.is_number()) doc.fail(ptr, "expected a number, found " + detail::type_name(v));
  return v.get<double>();
}

sensor::SensorReading read_reading(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  sensor::SensorReading out;
  out.timestamp = r.number("timestamp");
  out.sensor_id = r.string("sensor_id");
  out.value = read_reading_value(doc, r.get("value"), r.child("value"));
  out.unit = r.string_or("unit", "");
  r.finish();
  return out;
}

Json write_reading(const sensor::SensorReading& reading) {
  Json j = Json::object();
  j["timestamp"] = reading.timestamp;
  j["sensor_id"] = reading.sensor_id;
  if (std::isnan(reading.value)) {
    j["value"] = "nan";
  } else if (std::isinf(reading.value)) {
    j["value"] = reading.value > 0 ? "inf" : "-inf";
  } else {
    j["value"] = reading.value;
  }
  if (!reading.unit.empty()) j["unit"] = reading.unit;
  return j;
}

// A quantity is {"value", "unit"} or a compact string such as "3.6km".
template <class Q, class ParseText, class ParseUnit>
Q read_quantity(ObjectReader& r, const std::string& key, ParseText parse_text, ParseUnit parse_unit) {
  const Json& v = r.get(key);
  try {
    if (v.is_string()) return parse_text(v.template get<std::string>());
    ObjectReader q(r.doc(), v, r.child(key));
    Q out;
    out.value = q.number("value");
    const std::string unit = q.string("unit");
    q.finish();
    try {
      out.unit = parse_unit(unit);
    } catch (const ValidationError& e) {
      q.fail("unit", e.diagnostics().front().message);
    }
    if (out.value < 0.0) q.fail("value", "must be non-negative");
    return out;
  } catch (const ValidationError& e) {
    r.fail(key, e.diagnostics().front().message);
  }
}

template <class Q>
Json write_quantity(const Q& q) {
  Json j = Json::object();
  j["value"] = q.value;
  j["unit"] = std::string(potc::to_string(q.unit));
  return j;
}

std::optional<double> optional_number(ObjectReader& r, const std::string& key) {
  if (!r.has(key)) return std::nullopt;
  return r.number(key);
}

potc::TaskRecord read_record(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  potc::TaskRecord rec;
  rec.spec = detail_json::read_task(doc, r.get("task"), r.child("task"));
  rec.elapsed_at_start = r.number("elapsed_at_start");
  {
    ObjectReader p(doc, r.get("predicted"), r.child("predicted"));
    rec.predicted_potc_nominal = p.number("potc_nominal");
    rec.predicted_potc_sensor = p.number("potc_sensor");
    rec.predicted_duration = p.number("duration_hours");
    rec.predicted_distance = optional_number(p, "distance_m");
    p.finish();
  }
  if (const Json* actual = r.find("actual")) {
    ObjectReader a(doc, *actual, r.child("actual"));
    rec.actual_potc_nominal = a.number("potc_nominal");
    rec.actual_potc_sensor = a.number("potc_sensor");
    rec.actual_duration = a.number("duration_hours");
    rec.actual_distance = optional_number(a, "distance_m");
    a.finish();
  }
  r.finish();
  return rec;
}

}  // namespace

namespace detail_json {

potc::Duration read_duration(ObjectReader& r, const std::string& key) {
  return read_quantity<potc::Duration>(r, key, potc::parse_duration, potc::parse_duration_unit);
}

potc::Distance read_distance(ObjectReader& r, const std::string& key) {
  return read_quantity<potc::Distance>(r, key, potc::parse_distance, potc::parse_distance_unit);
}

potc::TaskSpec read_task(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  potc::TaskSpec spec;
  spec.task_id = r.string_or("task_id", "");
  if (r.has("task_time")) {
    spec.duration = read_duration(r, "task_time");
  }
  if (r.has("distance")) {
    spec.distance = read_distance(r, "distance");
  }
  if (r.has("speed")) {
    spec.speed = read_quantity<potc::Speed>(r, "speed", potc::parse_speed, potc::parse_speed_unit);
  }
  if (const Json* positions = r.find("task_positions")) {
    const std::string pp = r.child("task_positions");
    if (!positions->is_array()) doc.fail(pp, "expected an array of positions");
    for (std::size_t i = 0; i < positions->size(); ++i) {
      const Json& pos = (*positions)[i];
      const std::string ip = pp + "/" + std::to_string(i);
      if (!pos.is_array()) doc.fail(ip, "expected a coordinate array");
      std::vector<double> coords;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        coords.push_back(detail::as_number(doc, pos[k], ip + "/" + std::to_string(k)));
      }
      spec.waypoints.push_back(std::move(coords));
    }
  }
  r.finish();
  if (spec.distance.has_value() == spec.duration.has_value()) {
    doc.fail(ptr, "exactly one of 'task_time' and 'distance' must be given");
  }
  if (spec.distance && !spec.speed) doc.fail(ptr, "'speed' is required with 'distance'");
  return spec;
}

Json write_task(const potc::TaskSpec& spec) {
  Json j = Json::object();
  if (!spec.task_id.empty()) j["task_id"] = spec.task_id;
  if (spec.duration) j["task_time"] = write_quantity(*spec.duration);
  if (spec.distance) j["distance"] = write_quantity(*spec.distance);
  if (spec.speed) j["speed"] = write_quantity(*spec.speed);
  if (!spec.waypoints.empty()) {
    Json positions = Json::array();
    for (const auto& p : spec.waypoints) positions.push_back(p);
    j["task_positions"] = positions;
  }
  return j;
}

Json write_record(const potc::TaskRecord& rec) {
  Json j = Json::object();
  j["task"] = write_task(rec.spec);
  j["elapsed_at_start"] = rec.elapsed_at_start;
  Json p = Json::object();
  p["potc_nominal"] = rec.predicted_potc_nominal;
  p["potc_sensor"] = rec.predicted_potc_sensor;
  p["duration_hours"] = rec.predicted_duration;
  if (rec.predicted_distance) p["distance_m"] = *rec.predicted_distance;
  j["predicted"] = p;
  if (rec.completed()) {
    Json a = Json::object();
    a["potc_nominal"] = rec.actual_potc_nominal.value_or(1.0);
    a["potc_sensor"] = rec.actual_potc_sensor.value_or(1.0);
    a["duration_hours"] = *rec.actual_duration;
    if (rec.actual_distance) a["distance_m"] = *rec.actual_distance;
    j["actual"] = a;
  }
  return j;
}

Json write_snapshot(const sensor::AnalysisSnapshot& s) {
  auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
  Json j = Json::object();
  j["t"] = s.t;
  j["nominal_lambda"] = num(s.nominal_lambda);
  j["nominal_R"] = s.nominal_r;
  j["sensor_lambda"] = num(s.sensor_lambda);
  j["sensor_R"] = s.sensor_r;
  j["potc_nominal"] = s.potc_nominal ? Json(*s.potc_nominal) : Json(nullptr);
  j["potc_sensor"] = s.potc_sensor ? Json(*s.potc_sensor) : Json(nullptr);
  j["failed"] = s.failed;
  return j;
}

Json write_binding(const sensor::SensorBinding& b) {
  Json j = Json::object();
  j["sensor_id"] = b.sensor_id;
  j["target_path"] = b.target_path;
  j["target_factor"] = b.target_factor;
  Json curve = Json::array();
  for (const auto& [x, m] : b.curve.knots()) curve.push_back(Json::array({x, m}));
  j["curve"] = curve;
  return j;
}

}  // namespace detail_json

std::vector<sensor::SensorBinding> parse_bindings(std::string_view text) {
  const Document doc(text);
  ObjectReader r(doc, doc.root(), "");
  check_schema(r, kBindingsSchema);
  const Json& list = read_array(r, "bindings");
  r.finish();
  std::vector<sensor::SensorBinding> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(read_binding(doc, list[i], "/bindings/" + std::to_string(i)));
  }
  return out;
}

std::string serialize_bindings(const std::vector<sensor::SensorBinding>& bindings) {
  Json j = Json::object();
  j["schema"] = kBindingsSchema;
  Json list = Json::array();
  for (const auto& b : bindings) list.push_back(detail_json::write_binding(b));
  j["bindings"] = list;
  return detail::dump_canonical(j);
}

sensor::SensorBinding parse_binding(std::string_view text) {
  const Document doc(text);
  return read_binding(doc, doc.root(), "");
}

sensor::SensorReading parse_reading(std::string_view text) {
  const Document doc(text);
  return read_reading(doc, doc.root(), "");
}

std::string serialize_reading(const sensor::SensorReading& reading) {
  std::string line = detail::dump_compact(write_reading(reading));
  while (!line.empty() && line.back() == '\n') line.pop_back();
  return line;
}

std::vector<sensor::SensorReading> parse_reading_log(std::string_view text) {
  std::vector<sensor::SensorReading> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(parse_reading(line));
    } catch (const SchemaError& e) {
      throw SchemaError("/" + std::to_string(out.size()) + e.pointer(), line_no,
                        e.message());
    }
  }
  return out;
}

std::string serialize_reading_log(const std::vector<sensor::SensorReading>& log) {
  std::string out;
  for (const auto& r : log) out += serialize_reading(r) + '\n';
  return out;
}

potc::TaskSpec parse_task(std::string_view text) {
  const Document doc(text);
  return detail_json::read_task(doc, doc.root(), "");
}

std::vector<potc::TaskSpec> parse_task_request(std::string_view text) {
  const Document doc(text);
  const Json& root = doc.root();
  if (root.is_object() && root.contains("robot_task_list")) {
    ObjectReader r(doc, root, "");
    const Json& list = read_array(r, "robot_task_list");
    r.finish();
    std::vector<potc::TaskSpec> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
      out.push_back(detail_json::read_task(doc, list[i], "/robot_task_list/" + std::to_string(i)));
    }
    return out;
  }
  return {detail_json::read_task(doc, root, "")};
}

std::string serialize_task(const potc::TaskSpec& spec) {
  return detail::dump_canonical(detail_json::write_task(spec));
}

std::vector<potc::TaskRecord> parse_task_history(std::string_view text) {
  const Document doc(text);
  ObjectReader r(doc, doc.root(), "");
  check_schema(r, kHistorySchema);
  const Json& list = read_array(r, "robot_task_list");
  r.finish();
  std::vector<potc::TaskRecord> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(read_record(doc, list[i], "/robot_task_list/" + std::to_string(i)));
  }
  return out;
}

std::string serialize_task_history(const std::vector<potc::TaskRecord>& history) {
  Json j = Json::object();
  j["schema"] = kHistorySchema;
  Json list = Json::array();
  for (const auto& rec : history) list.push_back(detail_json::write_record(rec));
  j["robot_task_list"] = list;
  return detail::dump_canonical(j);
}

}  // namespace phm::store
