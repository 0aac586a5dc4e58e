#pragma once

// Sibling documents of a robot model: sensor bindings, reading logs and the
// task history.

#include <string>
#include <string_view>
#include <vector>

#include "phm/potc.hpp"
#include "phm/sensor_pipeline.hpp"

namespace phm::store {

/// {"schema": "phm-bindings/1", "bindings": [...]}
std::vector<sensor::SensorBinding> parse_bindings(std::string_view text);
std::string serialize_bindings(const std::vector<sensor::SensorBinding>& bindings);

/// One binding object: {sensor_id, target_path, target_factor, curve}.
sensor::SensorBinding parse_binding(std::string_view text);

/// One reading record: {"timestamp", "sensor_id", "value", "unit"}. The
/// value may also be the string "nan", "inf" or "-inf".
sensor::SensorReading parse_reading(std::string_view text);
/// Single line, no trailing newline.
std::string serialize_reading(const sensor::SensorReading& reading);

/// Line-delimited reading records; blank lines are skipped. Errors carry the
/// line number within the log.
std::vector<sensor::SensorReading> parse_reading_log(std::string_view text);
std::string serialize_reading_log(const std::vector<sensor::SensorReading>& log);

/// One task object: {"task_id", "task_time" | "distance" + "speed",
/// "task_positions"?}. Quantities are either {"value", "unit"} or a string
/// such as "3.6km".
potc::TaskSpec parse_task(std::string_view text);
/// A single task object or {"robot_task_list": [task, ...]}.
std::vector<potc::TaskSpec> parse_task_request(std::string_view text);
std::string serialize_task(const potc::TaskSpec& spec);

/// {"schema": "phm-task-history/1", "robot_task_list": [record, ...]}
std::vector<potc::TaskRecord> parse_task_history(std::string_view text);
std::string serialize_task_history(const std::vector<potc::TaskRecord>& history);

}  // namespace phm::store
