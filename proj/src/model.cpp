#include "phm/model.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "phm/format.hpp"

namespace phm::store {

namespace {

void escape_into(std::string& out, std::string_view name) {
  for (char c : name) {
    if (c == '/' || c == '\\') out += '\\';
    out += c;
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void apply_overrides(hazard::FactorSet& factors, const std::map<std::string, double>& overrides) {
  for (const auto& [name, multiplier] : overrides) {
    factors.set(name, factors.get(name) * multiplier);
  }
}

}  // namespace

bool ConfigNode::Group::operator==(const Group& other) const {
  return kind == other.kind && children == other.children;
}

std::string kind_name(const ComponentParams& params) {
  return std::visit(
      Overloaded{
          [](const BatteryParams&) { return std::string("battery"); },
          [](const BearingParams&) { return std::string("bearing"); },
          [](const hazard::MotorParams&) { return std::string("motor"); },
          [](const ElectricalParams& p) { return std::string(hazard::to_string(p.kind)); },
          [](const hazard::RotatingDeviceParams&) { return std::string("rotating_device"); },
          [](const CustomParams&) { return std::string("custom"); },
      },
      params);
}

std::string component_path(std::string_view module, std::string_view submodule,
                           std::string_view component) {
  std::string out;
  escape_into(out, module);
  out += '/';
  escape_into(out, submodule);
  out += '/';
  escape_into(out, component);
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts(1);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const char c = path[i];
    if (c == '\\') {
      if (i + 1 == path.size()) return {};
      parts.back() += path[++i];
    } else if (c == '/') {
      parts.emplace_back();
    } else {
      parts.back() += c;
    }
  }
  return parts;
}

const ComponentSpec* RobotModel::find(std::string_view path) const {
  const auto parts = split_path(path);
  if (parts.size() != 3) return nullptr;
  for (const auto& m : modules) {
    if (m.name != parts[0]) continue;
    for (const auto& s : m.submodules) {
      if (s.name != parts[1]) continue;
      for (const auto& c : s.components) {
        if (c.name == parts[2]) return &c;
      }
    }
  }
  return nullptr;
}

std::vector<std::string> RobotModel::component_paths() const {
  std::vector<std::string> out;
  for (const auto& m : modules) {
    for (const auto& s : m.submodules) {
      for (const auto& c : s.components) out.push_back(component_path(m.name, s.name, c.name));
    }
  }
  return out;
}

bool accepts_factor(const ComponentSpec& spec, std::string_view factor) {
  return std::visit(
      Overloaded{
          [](const BatteryParams&) { return false; },
          [&](const BearingParams&) { return hazard::is_mechanical_factor(factor); },
          [&](const hazard::MotorParams&) { return factor == "CSF"; },
          [&](const ElectricalParams& p) {
            const auto& names = hazard::required_factors(p.kind);
            return std::find(names.begin(), names.end(), factor) != names.end();
          },
          [](const hazard::RotatingDeviceParams&) { return false; },
          [&](const CustomParams&) { return !factor.empty(); },
      },
      spec.params);
}

FailureRate component_rate(const ComponentSpec& spec, const hazard::FactorLookup& lookup,
                           const std::map<std::string, double>* overrides,
                           std::vector<Diagnostic>* warnings) {
  static const std::map<std::string, double> kNone;
  const auto& extra = overrides ? *overrides : kNone;
  return std::visit(
      Overloaded{
          [](const BatteryParams& p) { return hazard::battery_rate(p.type); },
          [&](const BearingParams& p) {
            auto factors = p.factors;
            apply_overrides(factors, extra);
            return hazard::bearing_rate(p.base_rate, factors);
          },
          [&](const hazard::MotorParams& p) {
            auto params = p;
            if (auto it = extra.find("CSF"); it != extra.end()) params.service_factor *= it->second;
            return hazard::motor_rate(params);
          },
          [&](const ElectricalParams& p) {
            auto factors = p.factors;
            if (!factors.contains("piE")) factors.set("piE", lookup.pi_e(spec.environment));
            if (!factors.contains("piQ") && !spec.quality.empty()) {
              factors.set("piQ", lookup.pi_q(hazard::to_string(p.kind), spec.quality));
            }
            apply_overrides(factors, extra);
            return hazard::factor_product_rate(p.kind, p.base_rate, factors, warnings);
          },
          [](const hazard::RotatingDeviceParams& p) { return hazard::rotating_device_rate(p); },
          [&](const CustomParams& p) {
            auto multipliers = p.multipliers;
            for (const auto& [name, m] : extra) {
              auto it = std::find_if(multipliers.begin(), multipliers.end(),
                                     [&](const auto& kv) { return kv.first == name; });
              if (it == multipliers.end()) {
                multipliers.emplace_back(name, m);
              } else {
                it->second *= m;
              }
            }
            return hazard::custom_rate(p.base_rate, multipliers);
          },
      },
      spec.params);
}

namespace {

LifeModel component_life(const ComponentSpec& spec, const RobotModel& model,
                         const std::map<std::string, double>* overrides) {
  if (spec.life) {
    double alpha = spec.life->alpha;
    if (overrides && !overrides->empty()) {
      // Proportional hazards: scaling h by r scales alpha by r^(-1/beta).
      const double nominal = component_rate(spec, model.lookup).per_hour();
      const double adjusted = component_rate(spec, model.lookup, overrides).per_hour();
      if (nominal > 0.0) alpha *= std::pow(adjusted / nominal, -1.0 / spec.life->beta);
    }
    return LifeModel::weibull(alpha, spec.life->beta);
  }
  return LifeModel::exponential(component_rate(spec, model.lookup, overrides));
}

rbd::BlockExpr build_node(const ConfigNode& node, const RobotModel& model,
                          const FactorOverrides& overrides) {
  if (node.is_ref()) {
    const auto& path = std::get<std::string>(node.node);
    const ComponentSpec* spec = model.find(path);
    if (!spec) throw ValidationError(path, "unresolved reference");
    auto it = overrides.find(path);
    return rbd::BlockExpr::leaf(path,
                                component_life(*spec, model, it == overrides.end() ? nullptr : &it->second),
                                spec->quantity);
  }
  const auto& group = std::get<ConfigNode::Group>(node.node);
  std::vector<rbd::BlockExpr> children;
  children.reserve(group.children.size());
  for (const auto& child : group.children) children.push_back(build_node(child, model, overrides));
  return group.kind == rbd::GroupKind::kSeries ? rbd::BlockExpr::series(std::move(children))
                                               : rbd::BlockExpr::parallel(std::move(children));
}

ConfigNode default_configuration(const RobotModel& model) {
  const std::set<std::string> excluded(model.excluded.begin(), model.excluded.end());
  std::vector<ConfigNode> refs;
  for (auto& path : model.component_paths()) {
    if (!excluded.count(path)) refs.push_back(ConfigNode::ref(path));
  }
  return ConfigNode::group(rbd::GroupKind::kSeries, std::move(refs));
}

void collect_refs(const ConfigNode& node, const std::string& where,
                  std::map<std::string, int>& counts, std::vector<Diagnostic>& out) {
  if (node.is_ref()) {
    ++counts[std::get<std::string>(node.node)];
    return;
  }
  const auto& group = std::get<ConfigNode::Group>(node.node);
  if (group.children.empty()) out.push_back({where, "empty group"});
  for (std::size_t i = 0; i < group.children.size(); ++i) {
    collect_refs(group.children[i], where + ".children[" + std::to_string(i) + "]", counts, out);
  }
}

}  // namespace

std::vector<Diagnostic> validate_model(const RobotModel& model) {
  std::vector<Diagnostic> out;
  std::set<std::string> paths;
  for (const auto& m : model.modules) {
    for (const auto& s : m.submodules) {
      for (const auto& c : s.components) {
        const std::string path = component_path(m.name, s.name, c.name);
        if (!paths.insert(path).second) out.push_back({path, "duplicate component path"});
        if (c.name.empty() || s.name.empty() || m.name.empty()) {
          out.push_back({path, "module, submodule and component names must be non-empty"});
        }
        if (c.quantity < 1) out.push_back({path, "quantity must be a positive integer"});
        try {
          const double rate = component_rate(c, model.lookup).per_hour();
          if (!c.life && !(rate > 0.0)) {
            out.push_back({path, "exponential life needs a positive failure rate"});
          }
        } catch (const ValidationError& e) {
          for (const auto& d : e.diagnostics()) out.push_back({path + "#" + d.path, d.message});
        } catch (const Error& e) {
          out.push_back({path, e.what()});
        }
        if (c.life) {
          if (!(c.life->alpha > 0.0) || !std::isfinite(c.life->alpha) || !(c.life->beta > 0.0) ||
              !std::isfinite(c.life->beta)) {
            out.push_back({path, "Weibull alpha and beta must be positive"});
          }
        } else if (model.life_model_default == LifeFamily::kWeibull) {
          out.push_back({path, "life model default is weibull but no Weibull parameters given"});
        }
      }
    }
  }

  std::map<std::string, int> counts;
  if (model.configuration) collect_refs(*model.configuration, "configuration", counts, out);
  const std::set<std::string> excluded(model.excluded.begin(), model.excluded.end());
  for (const auto& path : model.excluded) {
    if (!paths.count(path)) out.push_back({path, "excluded path does not name a component"});
  }
  for (const auto& [path, n] : counts) {
    if (!paths.count(path)) {
      out.push_back({path, "unresolved reference in configuration"});
    } else if (n > 1) {
      out.push_back({path, "component referenced " + std::to_string(n) + " times"});
    } else if (excluded.count(path)) {
      out.push_back({path, "component is both configured and excluded"});
    }
  }
  if (model.configuration) {
    for (const auto& path : paths) {
      if (!counts.count(path) && !excluded.count(path)) {
        out.push_back({path, "component is neither configured nor excluded"});
      }
    }
  }
  if (paths.size() == excluded.size() && !paths.empty()) {
    out.push_back({"configuration", "every component is excluded"});
  }
  if (paths.empty()) out.push_back({"modules", "model has no components"});
  return out;
}

rbd::BlockExpr build_block(const RobotModel& model, const FactorOverrides& overrides) {
  auto problems = validate_model(model);
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (model.configuration) return build_node(*model.configuration, model, overrides);
  return build_node(default_configuration(model), model, overrides);
}

std::string read_file(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RobotModel load_model(const std::string& file) { return parse_model(read_file(file)); }

void save_atomically(const std::string& file, std::string_view text) {
  const std::filesystem::path target(file);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error("cannot replace '" + file + "': " + ec.message());
}

}  // namespace phm::store
