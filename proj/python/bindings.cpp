#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phm/documents.hpp"
#include "phm/error.hpp"
#include "phm/life_model.hpp"
#include "phm/model.hpp"
#include "phm/potc.hpp"
#include "phm/rbd.hpp"
#include "phm/sensor_pipeline.hpp"

namespace py = pybind11;

namespace {

// A parsed model with its block diagram built once.
class Model {
 public:
  explicit Model(phm::store::RobotModel model)
      : model_(std::make_shared<const phm::store::RobotModel>(std::move(model))),
        tree_(phm::store::build_block(*model_)) {}

  std::string to_json() const { return phm::store::serialize_model(*model_); }
  std::vector<std::string> component_paths() const { return model_->component_paths(); }
  double hazard(double t) const { return phm::rbd::system_hazard(tree_, t); }
  double reliability(double t) const { return phm::rbd::system_reliability(tree_, t); }
  double mttf() const { return phm::rbd::system_mttf(tree_); }

  double potc(double elapsed, std::optional<std::string> time, std::optional<std::string> distance,
              std::optional<std::string> speed) const {
    phm::potc::TaskSpec spec;
    if (time) spec.duration = phm::potc::parse_duration(*time);
    if (distance) spec.distance = phm::potc::parse_distance(*distance);
    if (speed) spec.speed = phm::potc::parse_speed(*speed);
    return phm::potc::predict_potc(tree_, elapsed, spec).potc;
  }

  double rul(double elapsed, double threshold) const { return phm::potc::rul(tree_, elapsed, threshold); }

  const std::shared_ptr<const phm::store::RobotModel>& shared() const { return model_; }

 private:
  std::shared_ptr<const phm::store::RobotModel> model_;
  phm::rbd::BlockExpr tree_;
};

py::dict life_metrics(const phm::LifeModel& model, double t) {
  const auto m = phm::eval_life(model, t);
  py::dict d;
  d["density"] = m.density;
  d["unreliability"] = m.unreliability;
  d["reliability"] = m.reliability;
  d["hazard"] = m.hazard;
  return d;
}

py::list diagnostics(const std::vector<phm::Diagnostic>& found) {
  py::list out;
  for (const auto& d : found) out.append(py::make_tuple(d.path, d.message));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reliability, POTC and RUL for robot component models";

  auto error = py::register_exception<phm::Error>(m, "Error", PyExc_ValueError);
  py::register_exception<phm::DomainError>(m, "DomainError", error.ptr());
  py::register_exception<phm::SystemFailedError>(m, "SystemFailedError", error.ptr());
  py::register_exception<phm::NumericError>(m, "NumericError", error.ptr());
  // Schema and validation errors carry locations; keep them in the message.
  py::register_exception<phm::SchemaError>(m, "SchemaError", error.ptr());
  py::register_exception<phm::ValidationError>(m, "ValidationError", error.ptr());

  py::class_<phm::LifeModel>(m, "LifeModel")
      .def_static("exponential", &phm::LifeModel::exponential_per_hour, py::arg("rate_per_hour"))
      .def_static("weibull", &phm::LifeModel::weibull, py::arg("alpha"), py::arg("beta"))
      .def("eval", &life_metrics, py::arg("t"), "density, unreliability, reliability and hazard at t hours")
      .def("reliability", py::vectorize([](phm::LifeModel& lm, double t) {
             return phm::eval_life(lm, t).reliability;
           }), py::arg("t"))
      .def("mttf", [](const phm::LifeModel& lm) { return phm::mttf(lm); });

  py::class_<Model>(m, "Model")
      .def_static("from_json", [](const std::string& text) { return Model(phm::store::parse_model(text)); },
                  py::arg("text"))
      .def_static("load", [](const std::string& path) { return Model(phm::store::load_model(path)); },
                  py::arg("path"))
      .def_static("example", [](bool parallel) { return Model(phm::store::ota_example(parallel)); },
                  py::arg("parallel_batteries") = false)
      .def("to_json", &Model::to_json)
      .def("component_paths", &Model::component_paths)
      .def("hazard", &Model::hazard, py::arg("t") = 0.0)
      .def("reliability", py::vectorize([](Model& model, double t) { return model.reliability(t); }),
           py::arg("t"))
      .def("mttf", &Model::mttf)
      .def("potc", &Model::potc, py::arg("elapsed") = 0.0, py::kw_only(), py::arg("time") = py::none(),
           py::arg("distance") = py::none(), py::arg("speed") = py::none())
      .def("rul", &Model::rul, py::arg("elapsed") = 0.0, py::arg("threshold") = phm::potc::kDefaultRulThreshold);

  m.def("validate", [](const std::string& text) {
    try {
      return diagnostics(phm::store::validate_model(phm::store::parse_model(text)));
    } catch (const phm::ValidationError& e) {
      return diagnostics(e.diagnostics());
    } catch (const phm::SchemaError& e) {
      return diagnostics({{e.pointer(), e.message()}});
    }
  }, py::arg("text"), "List of (path, message); empty when the model is valid");

  m.def("replay", [](const Model& model, const std::string& bindings, const std::string& log,
                     double tick_period_s, double time_scale, double start_hours,
                     std::optional<std::size_t> ticks, std::size_t window) {
    phm::sensor::ReplayConfig config;
    config.tick_period_s = tick_period_s;
    config.time_scale = time_scale;
    config.start_hours = start_hours;
    config.ticks = ticks;
    config.window = window;
    const auto series = phm::sensor::replay(model.shared(), phm::store::parse_bindings(bindings),
                                            phm::store::parse_reading_log(log), config);
    return phm::sensor::snapshots_csv(series);
  }, py::arg("model"), py::arg("bindings"), py::arg("log"), py::kw_only(), py::arg("tick_period_s") = 1.0,
     py::arg("time_scale") = 1.0, py::arg("start_hours") = 0.0, py::arg("ticks") = py::none(),
     py::arg("window") = 1, "Snapshot CSV of a reading-log replay (same bytes as `phm replay`)");
}
