#include "phm/hazard_models.hpp"

#include <algorithm>
#include <cmath>

#include "phm/format.hpp"

namespace phm::hazard {

namespace {

const std::vector<std::string> kElectricalNames = {"piT", "piC", "piV",  "piSR", "piQ",
                                                   "piE", "piS", "piP",  "piK"};
const std::vector<std::string> kMechanicalNames = {"CY", "CR",  "CV", "CCW",
                                                   "Ct", "CSF", "CC"};

struct KindEntry {
  ElectricalKind kind;
  std::string_view name;
  std::vector<std::string> factors;
};

const std::vector<KindEntry>& kind_table() {
  static const std::vector<KindEntry> table = {
      {ElectricalKind::kCapacitor, "capacitor", {"piT", "piC", "piV", "piSR", "piQ", "piE"}},
      {ElectricalKind::kDiode, "diode", {"piT", "piS", "piC", "piQ", "piE"}},
      {ElectricalKind::kInductor, "inductor", {"piT", "piQ", "piE"}},
      {ElectricalKind::kFuse, "fuse", {"piE"}},
      {ElectricalKind::kResistor, "resistor", {"piT", "piP", "piS", "piQ", "piE"}},
      {ElectricalKind::kConnectorGeneral, "connector_general", {"piT", "piK", "piQ", "piE"}},
      {ElectricalKind::kConnectorSocket, "connector_socket", {"piP", "piQ", "piE"}},
      {ElectricalKind::kQuartzCrystal, "quartz_crystal", {"piQ", "piE"}},
  };
  return table;
}

const KindEntry& entry(ElectricalKind kind) {
  const auto& table = kind_table();
  return *std::find_if(table.begin(), table.end(),
                       [kind](const KindEntry& e) { return e.kind == kind; });
}

FailureRate per_million(const FailureRate& rate) {
  return rate.converted(RateUnit::kPerMillionHours);
}

}  // namespace

std::string_view to_string(EnvironmentClass env) {
  switch (env) {
    case EnvironmentClass::kGroundBenign: return "GroundBenign";
    case EnvironmentClass::kGroundFixed: return "GroundFixed";
    case EnvironmentClass::kGroundMobile: return "GroundMobile";
  }
  return "GroundBenign";
}

EnvironmentClass parse_environment(std::string_view text) {
  if (text == "GroundBenign" || text == "GB") return EnvironmentClass::kGroundBenign;
  if (text == "GroundFixed" || text == "GF") return EnvironmentClass::kGroundFixed;
  if (text == "GroundMobile" || text == "GM") return EnvironmentClass::kGroundMobile;
  throw ValidationError("", "unknown environment class '" + std::string(text) + "'");
}

std::string_view to_string(ElectricalKind kind) { return entry(kind).name; }

std::optional<ElectricalKind> parse_electrical_kind(std::string_view text) {
  for (const auto& e : kind_table()) {
    if (e.name == text) return e.kind;
  }
  return std::nullopt;
}

const std::vector<std::string>& required_factors(ElectricalKind kind) {
  return entry(kind).factors;
}

const std::vector<std::string>& bearing_factors() { return kMechanicalNames; }

bool is_electrical_factor(std::string_view name) {
  return std::find(kElectricalNames.begin(), kElectricalNames.end(), name) !=
         kElectricalNames.end();
}

bool is_mechanical_factor(std::string_view name) {
  return std::find(kMechanicalNames.begin(), kMechanicalNames.end(), name) !=
         kMechanicalNames.end();
}

FactorSet::FactorSet(std::initializer_list<std::pair<const std::string, double>> init) {
  for (const auto& [name, value] : init) set(name, value);
}

void FactorSet::set(const std::string& name, double value) {
  if (!is_electrical_factor(name) && !is_mechanical_factor(name)) {
    throw ValidationError(name, "unrecognized factor name");
  }
  if (!std::isfinite(value) || value <= 0.0) {
    throw ValidationError(name, "factor must be positive and finite, got " +
                                    format_number(value));
  }
  values_[name] = value;
}

double FactorSet::get(const std::string& name) const {
  auto it = values_.find(name);
  return it == values_.end() ? 1.0 : it->second;
}

std::string_view to_string(BatteryType type) {
  switch (type) {
    case BatteryType::kPrimaryCell: return "primary_cell";
    case BatteryType::kNiCd: return "nicd";
    case BatteryType::kLiIon: return "li_ion";
  }
  return "primary_cell";
}

BatteryType parse_battery_type(std::string_view text) {
  if (text == "primary_cell") return BatteryType::kPrimaryCell;
  if (text == "nicd") return BatteryType::kNiCd;
  if (text == "li_ion") return BatteryType::kLiIon;
  throw ValidationError("battery_type", "unknown battery type '" + std::string(text) + "'");
}

int battery_lambda0(BatteryType type) {
  switch (type) {
    case BatteryType::kPrimaryCell: return 20;
    case BatteryType::kNiCd: return 100;
    case BatteryType::kLiIon: return 150;
  }
  return 20;
}

FailureRate factor_product_rate(ElectricalKind kind, const FailureRate& base,
                                const FactorSet& factors, std::vector<Diagnostic>* warnings) {
  const auto& names = required_factors(kind);
  if (warnings != nullptr) {
    for (const auto& [name, value] : factors.explicit_values()) {
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        warnings->push_back({name, "factor not used by " + std::string(to_string(kind)) +
                                       " formula; ignored"});
      }
    }
  }
  FailureRate rate = per_million(base);
  for (const auto& name : names) rate = rate.scaled(factors.get(name));
  return rate;
}

FailureRate factor_product_rate(std::string_view kind, const FailureRate& base,
                                const FactorSet& factors, std::vector<Diagnostic>* warnings) {
  auto parsed = parse_electrical_kind(kind);
  if (!parsed) throw ValidationError("kind", "unknown electrical kind '" + std::string(kind) + "'");
  return factor_product_rate(*parsed, base, factors, warnings);
}

FailureRate bearing_rate(const FailureRate& base, const FactorSet& factors) {
  FailureRate rate = per_million(base);
  for (const auto& name : kMechanicalNames) rate = rate.scaled(factors.get(name));
  return rate;
}

FailureRate motor_rate(const MotorParams& p) {
  // Negative sub-rates cannot exist: FailureRate rejects them on construction.
  std::vector<Diagnostic> problems;
  if (!std::isfinite(p.service_factor) || p.service_factor <= 0.0) {
    problems.push_back({"service_factor", "service factor must be positive and finite"});
  }
  if (p.brush_count < 0) problems.push_back({"brush_count", "brush count must be >= 0"});
  if (!problems.empty()) throw ValidationError(std::move(problems));

  // Summed in formula order.
  double total = per_million(p.base_rate).value() * p.service_factor;
  total += per_million(p.winding_rate).value();
  total += kBrushRate * p.brush_count;
  total += kStatorRate;
  total += per_million(p.armature_shaft_rate).value();
  total += per_million(p.bearing_rate).value();
  total += per_million(p.gear_rate).value();
  total += per_million(p.capacitor_rate).value();
  return FailureRate::per_million_hours(total);
}

FailureRate battery_rate(BatteryType type) {
  // Integer lambda_0 divided by the exact power 10^9 rounds once.
  return FailureRate::hourly(battery_lambda0(type) / 1e9);
}

FailureRate rotating_device_rate(const RotatingDeviceParams& p) {
  std::vector<Diagnostic> problems;
  auto positive = [&](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) problems.push_back({name, "must be positive and finite"});
  };
  auto non_negative = [&](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) problems.push_back({name, "must be non-negative"});
  };
  non_negative(p.lambda1, "lambda1");
  non_negative(p.lambda2, "lambda2");
  positive(p.a, "A");
  positive(p.b, "B");
  if (!problems.empty()) throw ValidationError(std::move(problems));
  if (!(p.alpha_bearing > 0.0) || !(p.alpha_winding > 0.0) ||
      !std::isfinite(p.alpha_bearing) || !std::isfinite(p.alpha_winding)) {
    throw DomainError("rotating device characteristic lives alphaB and alphaW must be positive");
  }
  const double per_hour =
      p.lambda1 / (p.a * p.alpha_bearing) + p.lambda2 / (p.b * p.alpha_winding);
  return FailureRate::per_million_hours(per_hour * 1e6);
}

FailureRate custom_rate(const FailureRate& base,
                        const std::vector<std::pair<std::string, double>>& multipliers) {
  FailureRate rate = base;
  for (const auto& [name, value] : multipliers) {
    if (!std::isfinite(value) || value <= 0.0) {
      throw ValidationError(name, "multiplier must be positive and finite");
    }
    rate = rate.scaled(value);
  }
  return rate;
}

double FactorLookup::pi_e(EnvironmentClass env) const {
  auto it = environment.find(env);
  return it == environment.end() ? 1.0 : it->second;
}

double FactorLookup::pi_q(std::string_view family, std::string_view designator) const {
  auto fam = quality.find(std::string(family));
  if (fam == quality.end()) return 1.0;
  auto it = fam->second.find(std::string(designator));
  return it == fam->second.end() ? 1.0 : it->second;
}

}  // namespace phm::hazard
