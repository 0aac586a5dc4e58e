#include <cmath>

#include "json_io.hpp"
#include "phm/model.hpp"

namespace phm::store {

using detail::Document;
using detail::Json;
using detail::ObjectReader;

namespace {

constexpr const char* kModelSchema = "phm-model/1";
constexpr const char* kLookupSchema = "phm-factor-lookup/1";

// ---- reading ---------------------------------------------------------------

FailureRate read_rate(ObjectReader& parent, const std::string& key) {
  ObjectReader r(parent.doc(), parent.get(key), parent.child(key));
  const double value = r.number("value");
  const std::string unit = r.string("unit");
  r.finish();
  RateUnit parsed = RateUnit::kPerHour;
  try {
    parsed = parse_rate_unit(unit);
  } catch (const ValidationError& e) {
    r.fail("unit", e.diagnostics().front().message);
  }
  try {
    return FailureRate(value, parsed);
  } catch (const ValidationError& e) {
    r.fail("value", e.diagnostics().front().message);
  }
}

FailureRate read_rate_or_zero(ObjectReader& parent, const std::string& key) {
  return parent.has(key) ? read_rate(parent, key) : FailureRate{};
}

hazard::FactorSet read_factors(ObjectReader& parent) {
  hazard::FactorSet factors;
  const Json* raw = parent.find("factors");
  if (!raw) return factors;
  ObjectReader r(parent.doc(), *raw, parent.child("factors"));
  for (const auto& [name, unused] : raw->items()) {
    const double value = r.number(name);
    try {
      factors.set(name, value);
    } catch (const ValidationError& e) {
      r.fail(name, e.diagnostics().front().message);
    }
  }
  return factors;
}

ComponentParams read_params(ObjectReader& comp, const std::string& kind) {
  ObjectReader p(comp.doc(), comp.get("params"), comp.child("params"));
  ComponentParams out;
  if (kind == "battery") {
    const std::string type = p.string("battery_type");
    try {
      out = BatteryParams{hazard::parse_battery_type(type)};
    } catch (const ValidationError& e) {
      p.fail("battery_type", e.what());
    }
  } else if (kind == "bearing") {
    out = BearingParams{read_rate(p, "base_rate"), read_factors(p)};
  } else if (kind == "motor") {
    hazard::MotorParams m;
    m.base_rate = read_rate(p, "base_rate");
    m.service_factor = p.number_or("service_factor", 1.0);
    m.winding_rate = read_rate_or_zero(p, "winding_rate");
    m.brush_count = static_cast<int>(p.integer_or("brush_count", 0));
    m.armature_shaft_rate = read_rate_or_zero(p, "armature_shaft_rate");
    m.bearing_rate = read_rate_or_zero(p, "bearing_rate");
    m.gear_rate = read_rate_or_zero(p, "gear_rate");
    m.capacitor_rate = read_rate_or_zero(p, "capacitor_rate");
    out = m;
  } else if (kind == "rotating_device") {
    hazard::RotatingDeviceParams r;
    r.lambda1 = p.number("lambda1");
    r.lambda2 = p.number("lambda2");
    r.a = p.number("A");
    r.b = p.number("B");
    r.alpha_bearing = p.number("alphaB");
    r.alpha_winding = p.number("alphaW");
    out = r;
  } else if (kind == "custom") {
    CustomParams c;
    c.base_rate = read_rate(p, "base_rate");
    if (const Json* raw = p.find("multipliers")) {
      ObjectReader mr(p.doc(), *raw, p.child("multipliers"));
      for (const auto& [name, unused] : raw->items()) {
        const double v = mr.number(name);
        if (!(v > 0.0)) mr.fail(name, "multiplier must be positive");
        c.multipliers.emplace_back(name, v);
      }
    }
    out = c;
  } else if (auto electrical = hazard::parse_electrical_kind(kind)) {
    out = ElectricalParams{*electrical, read_rate(p, "base_rate"), read_factors(p)};
  } else {
    comp.fail("kind", "unknown component kind '" + kind + "'");
  }
  p.finish();
  return out;
}

ComponentSpec read_component(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  ComponentSpec c;
  c.name = r.string("name");
  const std::string kind = r.string("kind");
  const long long quantity = r.integer("quantity");
  if (quantity < 1 || quantity > 1'000'000) r.fail("quantity", "quantity must be in [1, 1000000]");
  c.quantity = static_cast<int>(quantity);
  if (r.has("environment")) {
    const std::string env = r.string("environment");
    try {
      c.environment = hazard::parse_environment(env);
    } catch (const ValidationError& e) {
      r.fail("environment", e.what());
    }
  }
  c.quality = r.string_or("quality", "");
  c.params = read_params(r, kind);
  if (const Json* life = r.find("life")) {
    ObjectReader lr(doc, *life, r.child("life"));
    if (lr.string("family") != "weibull") lr.fail("family", "only 'weibull' may be given explicitly");
    c.life = WeibullLife{lr.number("alpha"), lr.number("beta")};
    lr.finish();
  }
  c.note = r.string_or("note", "");
  r.finish();
  return c;
}

const Json& read_array(ObjectReader& r, const std::string& key) {
  const Json& v = r.get(key);
  if (!v.is_array()) r.fail(key, "expected an array, found " + detail::type_name(v));
  return v;
}

ConfigNode read_config(const Document& doc, const Json& value, const std::string& ptr) {
  ObjectReader r(doc, value, ptr);
  if (value.size() != 1) doc.fail(ptr, "configuration node needs exactly one of ref/series/parallel");
  if (r.has("ref")) {
    auto node = ConfigNode::ref(r.string("ref"));
    r.finish();
    return node;
  }
  const std::string key = r.has("series") ? "series" : "parallel";
  const Json& children = read_array(r, key);
  r.finish();
  std::vector<ConfigNode> nodes;
  for (std::size_t i = 0; i < children.size(); ++i) {
    nodes.push_back(read_config(doc, children[i], r.child(key) + "/" + std::to_string(i)));
  }
  return ConfigNode::group(key == "series" ? rbd::GroupKind::kSeries : rbd::GroupKind::kParallel,
                           std::move(nodes));
}

hazard::FactorLookup read_lookup(const Document& doc, const Json& value, const std::string& ptr) {
  hazard::FactorLookup lookup;
  ObjectReader r(doc, value, ptr);
  if (ptr.empty() && r.string("schema") != kLookupSchema) {
    r.fail("schema", std::string("expected schema '") + kLookupSchema + "'");
  }
  if (const Json* env = r.find("environment")) {
    ObjectReader er(doc, *env, r.child("environment"));
    for (const auto& [name, unused] : env->items()) {
      const double v = er.number(name);
      if (!(v > 0.0)) er.fail(name, "pi_E must be positive");
      try {
        lookup.environment[hazard::parse_environment(name)] = v;
      } catch (const ValidationError& e) {
        er.fail(name, e.what());
      }
    }
  }
  if (const Json* quality = r.find("quality")) {
    ObjectReader qr(doc, *quality, r.child("quality"));
    for (const auto& [family, designators] : quality->items()) {
      ObjectReader dr(doc, qr.get(family), qr.child(family));
      for (const auto& [designator, unused] : designators.items()) {
        const double v = dr.number(designator);
        if (!(v > 0.0)) dr.fail(designator, "pi_Q must be positive");
        lookup.quality[family][designator] = v;
      }
    }
  }
  r.finish();
  return lookup;
}

// ---- writing ---------------------------------------------------------------

Json write_rate(const FailureRate& rate) {
  Json j = Json::object();
  j["value"] = rate.value();
  j["unit"] = std::string(to_string(rate.unit()));
  return j;
}

Json write_factors(const hazard::FactorSet& factors) {
  Json j = Json::object();
  for (const auto& [name, value] : factors.explicit_values()) j[name] = value;
  return j;
}

Json write_params(const ComponentParams& params) {
  Json j = Json::object();
  if (const auto* b = std::get_if<BatteryParams>(&params)) {
    j["battery_type"] = std::string(hazard::to_string(b->type));
  } else if (const auto* br = std::get_if<BearingParams>(&params)) {
    j["base_rate"] = write_rate(br->base_rate);
    if (!br->factors.explicit_values().empty()) j["factors"] = write_factors(br->factors);
  } else if (const auto* m = std::get_if<hazard::MotorParams>(&params)) {
    j["base_rate"] = write_rate(m->base_rate);
    if (m->service_factor != 1.0) j["service_factor"] = m->service_factor;
    auto rate = [&j](const char* key, const FailureRate& r) {
      if (r.value() != 0.0) j[key] = write_rate(r);
    };
    rate("winding_rate", m->winding_rate);
    if (m->brush_count != 0) j["brush_count"] = m->brush_count;
    rate("armature_shaft_rate", m->armature_shaft_rate);
    rate("bearing_rate", m->bearing_rate);
    rate("gear_rate", m->gear_rate);
    rate("capacitor_rate", m->capacitor_rate);
  } else if (const auto* e = std::get_if<ElectricalParams>(&params)) {
    j["base_rate"] = write_rate(e->base_rate);
    if (!e->factors.explicit_values().empty()) j["factors"] = write_factors(e->factors);
  } else if (const auto* r = std::get_if<hazard::RotatingDeviceParams>(&params)) {
    j["lambda1"] = r->lambda1;
    j["lambda2"] = r->lambda2;
    j["A"] = r->a;
    j["B"] = r->b;
    j["alphaB"] = r->alpha_bearing;
    j["alphaW"] = r->alpha_winding;
  } else if (const auto* c = std::get_if<CustomParams>(&params)) {
    j["base_rate"] = write_rate(c->base_rate);
    if (!c->multipliers.empty()) {
      Json mj = Json::object();
      for (const auto& [name, value] : c->multipliers) mj[name] = value;
      j["multipliers"] = mj;
    }
  }
  return j;
}

Json write_component(const ComponentSpec& c) {
  Json j = Json::object();
  j["name"] = c.name;
  j["kind"] = kind_name(c.params);
  j["quantity"] = c.quantity;
  if (c.environment != hazard::EnvironmentClass::kGroundBenign) {
    j["environment"] = std::string(hazard::to_string(c.environment));
  }
  if (!c.quality.empty()) j["quality"] = c.quality;
  j["params"] = write_params(c.params);
  if (c.life) {
    j["life"] = Json::object();
    j["life"]["family"] = "weibull";
    j["life"]["alpha"] = c.life->alpha;
    j["life"]["beta"] = c.life->beta;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json write_config(const ConfigNode& node) {
  Json j = Json::object();
  if (node.is_ref()) {
    j["ref"] = std::get<std::string>(node.node);
    return j;
  }
  const auto& group = std::get<ConfigNode::Group>(node.node);
  Json children = Json::array();
  for (const auto& child : group.children) children.push_back(write_config(child));
  j[group.kind == rbd::GroupKind::kSeries ? "series" : "parallel"] = children;
  return j;
}

Json write_lookup_body(const hazard::FactorLookup& lookup) {
  Json j = Json::object();
  if (!lookup.environment.empty()) {
    Json env = Json::object();
    for (const auto& [cls, v] : lookup.environment) env[std::string(hazard::to_string(cls))] = v;
    j["environment"] = env;
  }
  if (!lookup.quality.empty()) {
    Json q = Json::object();
    for (const auto& [family, designators] : lookup.quality) {
      Json d = Json::object();
      for (const auto& [name, v] : designators) d[name] = v;
      q[family] = d;
    }
    j["quality"] = q;
  }
  return j;
}

}  // namespace

RobotModel parse_model(std::string_view text) {
  const Document doc(text);
  ObjectReader r(doc, doc.root(), "");
  const std::string schema = r.string("schema");
  if (schema != kModelSchema) {
    r.fail("schema", "unsupported schema '" + schema + "', expected '" + kModelSchema + "'");
  }
  RobotModel model;
  model.name = r.string("name");
  model.note = r.string_or("note", "");
  if (r.has("life_model_default")) {
    const std::string family = r.string("life_model_default");
    if (family == "exponential") {
      model.life_model_default = LifeFamily::kExponential;
    } else if (family == "weibull") {
      model.life_model_default = LifeFamily::kWeibull;
    } else {
      r.fail("life_model_default", "expected 'exponential' or 'weibull'");
    }
  }
  if (const Json* units = r.find("unit_preferences")) {
    ObjectReader ur(doc, *units, r.child("unit_preferences"));
    model.units.speed_unit = ur.string_or("speed_unit", model.units.speed_unit);
    model.units.time_unit = ur.string_or("time_unit", model.units.time_unit);
    if (model.units.speed_unit != "km/h" && model.units.speed_unit != "m/s") {
      ur.fail("speed_unit", "expected 'km/h' or 'm/s'");
    }
    if (model.units.time_unit != "h" && model.units.time_unit != "s") {
      ur.fail("time_unit", "expected 'h' or 's'");
    }
    ur.finish();
  }
  if (const Json* lookup = r.find("factor_lookup")) {
    model.lookup = read_lookup(doc, *lookup, r.child("factor_lookup"));
  }

  const Json& modules = read_array(r, "modules");
  for (std::size_t mi = 0; mi < modules.size(); ++mi) {
    const std::string mptr = "/modules/" + std::to_string(mi);
    ObjectReader mr(doc, modules[mi], mptr);
    Module module{mr.string("name"), {}};
    const Json& subs = read_array(mr, "submodules");
    for (std::size_t si = 0; si < subs.size(); ++si) {
      const std::string sptr = mptr + "/submodules/" + std::to_string(si);
      ObjectReader sr(doc, subs[si], sptr);
      SubModule sub{sr.string("name"), {}};
      const Json& comps = read_array(sr, "components");
      for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        sub.components.push_back(
            read_component(doc, comps[ci], sptr + "/components/" + std::to_string(ci)));
      }
      sr.finish();
      module.submodules.push_back(std::move(sub));
    }
    mr.finish();
    model.modules.push_back(std::move(module));
  }

  if (const Json* config = r.find("configuration")) {
    model.configuration = read_config(doc, *config, "/configuration");
  }
  if (r.has("excluded")) {
    const Json& excluded = read_array(r, "excluded");
    for (std::size_t i = 0; i < excluded.size(); ++i) {
      if (!excluded[i].is_string()) doc.fail("/excluded/" + std::to_string(i), "expected a string");
      model.excluded.push_back(excluded[i].get<std::string>());
    }
  }
  r.finish();

  auto problems = validate_model(model);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return model;
}

std::string serialize_model(const RobotModel& model) {
  Json j = Json::object();
  j["schema"] = kModelSchema;
  j["name"] = model.name;
  if (!model.note.empty()) j["note"] = model.note;
  if (model.life_model_default != LifeFamily::kExponential) j["life_model_default"] = "weibull";
  if (model.units != UnitPreferences{}) {
    j["unit_preferences"] = Json::object();
    j["unit_preferences"]["speed_unit"] = model.units.speed_unit;
    j["unit_preferences"]["time_unit"] = model.units.time_unit;
  }
  if (!model.lookup.environment.empty() || !model.lookup.quality.empty()) {
    j["factor_lookup"] = write_lookup_body(model.lookup);
  }
  Json modules = Json::array();
  for (const auto& m : model.modules) {
    Json mj = Json::object();
    mj["name"] = m.name;
    Json subs = Json::array();
    for (const auto& s : m.submodules) {
      Json sj = Json::object();
      sj["name"] = s.name;
      Json comps = Json::array();
      for (const auto& c : s.components) comps.push_back(write_component(c));
      sj["components"] = comps;
      subs.push_back(sj);
    }
    mj["submodules"] = subs;
    modules.push_back(mj);
  }
  j["modules"] = modules;
  if (model.configuration) j["configuration"] = write_config(*model.configuration);
  if (!model.excluded.empty()) j["excluded"] = model.excluded;
  return detail::dump_canonical(j);
}

hazard::FactorLookup parse_factor_lookup(std::string_view text) {
  const Document doc(text);
  return read_lookup(doc, doc.root(), "");
}

std::string serialize_factor_lookup(const hazard::FactorLookup& lookup) {
  Json j = Json::object();
  j["schema"] = kLookupSchema;
  const Json body = write_lookup_body(lookup);
  for (const auto& [key, value] : body.items()) j[key] = value;
  return detail::dump_canonical(j);
}

}  // namespace phm::store
