#include "phm/model.hpp"

namespace phm::store {

namespace {

using hazard::ElectricalKind;

ComponentSpec custom(std::string name, int quantity, double per_hour) {
  ComponentSpec c;
  c.name = std::move(name);
  c.quantity = quantity;
  c.params = CustomParams{FailureRate::hourly(per_hour), {}};
  c.environment = hazard::EnvironmentClass::kGroundMobile;
  return c;
}

ComponentSpec electrical(ElectricalKind kind, std::string name, int quantity, double per_hour) {
  ComponentSpec c = custom(std::move(name), quantity, per_hour);
  c.params = ElectricalParams{kind, FailureRate::hourly(per_hour), {}};
  return c;
}

ComponentSpec with_note(ComponentSpec c, std::string note) {
  c.note = std::move(note);
  return c;
}

constexpr const char* kDashRow =
    "inventory row has no component name; the sub-module name is reused";

}  // namespace

RobotModel ota_example(bool parallel_batteries) {
  RobotModel m;
  m.name = parallel_batteries ? "OTA (parallel batteries)" : "OTA";
  m.note =
      "OTA mobile robot inventory. Rates are per hour as listed in the inventory table. "
      "The configuration is all-series: components in series within each sub-module, "
      "sub-modules in series within each module, modules in series. The published "
      "configuration figure is not legible enough to confirm this grouping.";
  m.units.speed_unit = "km/h";

  using K = ElectricalKind;

  ComponentSpec battery;
  battery.name = "Battery";
  battery.quantity = 4;
  battery.params = BatteryParams{hazard::BatteryType::kPrimaryCell};
  battery.environment = hazard::EnvironmentClass::kGroundMobile;
  battery.note = kDashRow;

  SubModule battery_sub{"Battery", {}};
  if (parallel_batteries) {
    for (int i = 1; i <= 4; ++i) {
      ComponentSpec one = battery;
      one.name = "Battery #" + std::to_string(i);
      one.quantity = 1;
      one.note = "alternative reading: the four batteries as hot-standby parallel units";
      battery_sub.components.push_back(one);
    }
  } else {
    battery_sub.components.push_back(battery);
  }

  Module power{
      "Power",
      {battery_sub,
       {"Battery Control Board",
        {
            electrical(K::kCapacitor, "Capacitor", 28, 9.36e-06),
            custom("Thermistor", 9, 7.33e-06),
            electrical(K::kDiode, "Diode", 16, 6.25e-07),
            custom("LED", 9, 5.00e-06),
            electrical(K::kResistor, "Resistor", 26, 1.33e-07),
            custom("Trimpot", 3, 2.42e-06),
            custom("Step Down Switching Regulator", 7, 3.96e-07),
            electrical(K::kConnectorGeneral, "Terminal Blocks/Connector", 9, 2.21e-06),
            electrical(K::kConnectorSocket, "Connector/Socket", 1, 1.18e-07),
            electrical(K::kInductor, "Inductor", 7, 5.80e-08),
            custom("Current Sensor", 2, 2.50e-07),
            custom("Female Header", 1, 1.90e-06),
        }},
       {"Low Level Control Unit: DSK-MD",
        {
            electrical(K::kConnectorSocket, "XT60 Socket", 4, 7.53e-08),
            electrical(K::kDiode, "Zener Diode", 4, 1.77e-07),
            electrical(K::kDiode, "Ultrafast Diode", 4, 5.29e-07),
            electrical(K::kCapacitor, "Aluminum Capacitor", 4, 1.40e-07),
            electrical(K::kConnectorGeneral, "Micro USB Connector", 1, 6.07e-07),
            electrical(K::kQuartzCrystal, "16MHz Cryst. Osc.", 1, 1.77e-06),
            electrical(K::kQuartzCrystal, "32.768Khz Cryst. Osc.", 1, 4.26e-07),
            electrical(K::kResistor, "Resistors", 65, 4.99e-07),
            custom("STM32F407VGT6", 1, 1.00e-08),
            electrical(K::kFuse, "Resettable Fuse", 2, 2.30e-06),
        }}}};

  Module sensing{"Sensing",
                 {{"SICK Laser Sensor", {with_note(custom("SICK Laser Sensor", 1, 8.00e-08), kDashRow)}},
                  {"IPS",
                   {
                       custom("Antenna", 1, 5.80e-07),
                       electrical(K::kConnectorGeneral, "Micro USB Connector", 1, 6.07e-07),
                       custom("DW1000 Chip", 1, 8.60e-08),
                       electrical(K::kResistor, "Resistor", 5, 4.46e-07),
                       electrical(K::kCapacitor, "Capacitor", 5, 9.36e-07),
                   }},
                  {"Camera", {with_note(custom("Camera", 1, 5.88e-09), kDashRow)}}}};

  Module communication{
      "Communication",
      {{"Communication Card: DSK-M",
        {
            electrical(K::kResistor, "Resistor", 9, 4.53e-07),
            electrical(K::kCapacitor, "Capacitor", 9, 1.66e-07),
            electrical(K::kQuartzCrystal, "25MHz Crystal Oscillator", 1, 6.54e-06),
            electrical(K::kQuartzCrystal, "16Mhz Crystal Oscillator", 1, 5.90e-07),
            custom("STM32F407VGT6", 1, 2.30e-07),
            custom("SN65HVD230DR", 1, 1.70e-07),
            electrical(K::kFuse, "Fuse", 4, 8.00e-08),
            custom("LAN8720A-CP", 1, 5.90e-07),
            electrical(K::kConnectorGeneral, "Micro USB Connector", 1, 2.43e-06),
        }},
       {"Antenna", {with_note(custom("Antenna", 1, 7.50e-07), kDashRow)}}}};

  // DC motor: one decomposition (per 10^6 h) reproducing the listed 8.04:
  // base 1.0 x C_SF 1 + windings 0.639 + 2 brushes x 3.2 + stator 0.001.
  ComponentSpec motor;
  motor.name = "DC Motor";
  motor.quantity = 2;
  hazard::MotorParams mp;
  mp.base_rate = FailureRate::per_million_hours(1.0);
  mp.service_factor = 1.0;
  mp.winding_rate = FailureRate::per_million_hours(0.639);
  mp.brush_count = 2;
  motor.params = mp;
  motor.environment = hazard::EnvironmentClass::kGroundMobile;
  motor.note =
      "inventory row has no component name; sub-rates are one back-derived split of the "
      "listed 8.04e-06 per hour";

  ComponentSpec bearing;
  bearing.name = "Bearing";
  bearing.quantity = 4;
  bearing.params = BearingParams{FailureRate::hourly(3.61e-11), {}};
  bearing.environment = hazard::EnvironmentClass::kGroundMobile;
  bearing.note = kDashRow;

  Module mobility{"Mobility",
                  {{"Encoder", {with_note(custom("Encoder", 2, 5.80e-06), kDashRow)}},
                   {"Driver wheel", {with_note(custom("Driver wheel", 2, 1.80e-07), kDashRow)}},
                   {"Caster wheel", {with_note(custom("Caster wheel", 4, 6.80e-06), kDashRow)}},
                   {"DC Motor", {motor}},
                   {"Bearing", {bearing}}}};

  Module computation{
      "Computation",
      {{"YSK-M: High Level Control Unit", {custom("Inno-Box Industrial Box PC", 1, 6.50e-08)}},
       {"YSK-G: Vision Control Unit", {custom("NVIDIA JETSON TX2", 1, 5.00e-08)}}}};

  m.modules = {power, sensing, communication, mobility, computation};

  std::vector<ConfigNode> module_nodes;
  for (const auto& module : m.modules) {
    std::vector<ConfigNode> sub_nodes;
    for (const auto& sub : module.submodules) {
      std::vector<ConfigNode> refs;
      for (const auto& c : sub.components) {
        refs.push_back(ConfigNode::ref(component_path(module.name, sub.name, c.name)));
      }
      const auto kind = parallel_batteries && sub.name == "Battery" ? rbd::GroupKind::kParallel
                                                                    : rbd::GroupKind::kSeries;
      sub_nodes.push_back(ConfigNode::group(kind, std::move(refs)));
    }
    module_nodes.push_back(ConfigNode::group(rbd::GroupKind::kSeries, std::move(sub_nodes)));
  }
  m.configuration = ConfigNode::group(rbd::GroupKind::kSeries, std::move(module_nodes));
  return m;
}

}  // namespace phm::store
