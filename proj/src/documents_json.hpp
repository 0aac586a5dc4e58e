#pragma once

#include <string>

#include "json_io.hpp"
#include "phm/documents.hpp"

namespace phm::store::detail_json {

using phm::detail::Document;
using phm::detail::Json;
using phm::detail::ObjectReader;

potc::Duration read_duration(ObjectReader& r, const std::string& key);
potc::Distance read_distance(ObjectReader& r, const std::string& key);

potc::TaskSpec read_task(const Document& doc, const Json& value, const std::string& ptr);
Json write_task(const potc::TaskSpec& spec);
Json write_record(const potc::TaskRecord& record);
Json write_snapshot(const sensor::AnalysisSnapshot& s);
Json write_binding(const sensor::SensorBinding& b);

}  // namespace phm::store::detail_json
