#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "phm/error.hpp"
#include "phm/sensor_pipeline.hpp"

namespace phm::sensor {
namespace {

constexpr const char* kMotor = "Mobility/DC Motor/DC Motor";
constexpr const char* kWheel = "Mobility/Driver wheel/Driver wheel";

std::shared_ptr<const store::RobotModel> ota() {
  static const auto model = std::make_shared<const store::RobotModel>(store::ota_example());
  return model;
}

SensorBinding binding(std::string sensor, std::string path, std::string factor,
                      std::vector<std::pair<double, double>> knots) {
  return {std::move(sensor), std::move(path), std::move(factor), MappingCurve(std::move(knots))};
}

SensorReading reading(std::string sensor, double ts, double value) {
  return {std::move(sensor), ts, value, ""};
}

TEST(MappingCurve, InterpolatesAndClamps) {
  const MappingCurve c({{20, 1.0}, {60, 2.0}});
  EXPECT_EQ(c(40), 1.5);
  EXPECT_EQ(c(100), 2.0);
  EXPECT_EQ(c(-5), 1.0);
  EXPECT_EQ(MappingCurve({{0, 1.3}})(1e9), 1.3);
}

TEST(MappingCurve, RejectsBadKnots) {
  EXPECT_THROW(MappingCurve(std::vector<std::pair<double, double>>{}), ValidationError);
  EXPECT_THROW(MappingCurve({{1, 1.0}, {1, 2.0}}), ValidationError);
  EXPECT_THROW(MappingCurve({{1, 0.0}}), ValidationError);
}

TEST(Pipeline, IdentityCurveLeavesSnapshotsUnchanged) {
  Pipeline p(ota());
  p.bind(binding("temp", kMotor, "CSF", {{0, 1.0}}));
  p.apply(reading("temp", 0, 55));
  const auto s = p.snapshot(10.0);
  EXPECT_EQ(s.sensor_lambda, s.nominal_lambda);
  EXPECT_EQ(s.sensor_r, s.nominal_r);
}

TEST(Pipeline, BindRejectsUnknownTargets) {
  Pipeline p(ota());
  EXPECT_THROW(p.bind(binding("t", "power/ghost", "CSF", {{0, 1}})), ValidationError);
  EXPECT_THROW(p.bind(binding("t", kMotor, "piT", {{0, 1}})), ValidationError);
  EXPECT_THROW(p.bind(binding("t", "Power/Battery/Battery", "piT", {{0, 1}})), ValidationError);
}

TEST(Pipeline, RebindingIsIdempotent) {
  Pipeline p(ota());
  const auto b = binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}});
  p.bind(b);
  p.bind(b);
  EXPECT_EQ(p.bindings().size(), 1u);
}

TEST(Pipeline, TwoBindingsCombine) {
  Pipeline p(ota());
  p.bind(binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}}));
  p.bind(binding("vib", kWheel, "wear", {{0, 1}, {5, 3}}));
  p.apply(reading("temp", 0, 60));
  p.apply(reading("vib", 0, 5));
  const auto s = p.snapshot(1.0);
  // Two motors, each base term doubles (+1e-6 / h); two wheels, each rate
  // triples.
  const auto model = ota();
  const double wheel = store::component_rate(*model->find(kWheel), model->lookup).per_hour();
  EXPECT_NEAR(s.sensor_lambda, s.nominal_lambda + 2 * (1e-6 + 2 * wheel), 1e-18);
}

TEST(Pipeline, ReadingBookkeeping) {
  Pipeline p(ota());
  p.bind(binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}}));
  p.apply(reading("other", 0, 1));
  p.apply(reading("temp", 5, std::numeric_limits<double>::quiet_NaN()));
  p.apply(reading("temp", 5, 40));
  p.apply(reading("temp", 4, 60));
  EXPECT_EQ(p.counters().ignored_unbound, 1u);
  EXPECT_EQ(p.counters().rejected_non_finite, 1u);
  EXPECT_EQ(p.counters().dropped_out_of_order, 1u);
  EXPECT_EQ(p.counters().applied, 1u);
  EXPECT_EQ(p.multipliers()[0], 1.5);
}

TEST(Pipeline, MultiplierAboveOneRaisesHazard) {
  Pipeline p(ota());
  p.bind(binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}}));
  p.apply(reading("temp", 0, 60));
  const auto s = p.snapshot(100.0);
  EXPECT_GT(s.sensor_lambda, s.nominal_lambda);
  EXPECT_LT(s.sensor_r, s.nominal_r);
  p.clear_bindings();
  const auto cleared = p.snapshot(101.0);
  EXPECT_EQ(cleared.sensor_lambda, cleared.nominal_lambda);
  EXPECT_EQ(cleared.sensor_r, cleared.nominal_r);
}

TEST(Pipeline, SnapshotTimeMustNotGoBack) {
  Pipeline p(ota());
  p.snapshot(5.0);
  EXPECT_THROW(p.snapshot(4.0), DomainError);
}

TEST(Pipeline, FailedSystemFlagged) {
  store::RobotModel m = store::ota_example();
  Pipeline p(std::make_shared<const store::RobotModel>(m));
  const auto s = p.snapshot(1e6);
  EXPECT_TRUE(s.failed);
  EXPECT_TRUE(std::isnan(s.nominal_lambda));
  EXPECT_NE(snapshot_csv_row(s).find(",,"), std::string::npos);
}

TEST(Pipeline, BatchingDoesNotMatter) {
  std::vector<SensorReading> log;
  for (int i = 0; i < 50; ++i) log.push_back(reading(i % 2 ? "temp" : "vib", i, 10.0 + i));
  auto run = [&](std::size_t batch) {
    Pipeline p(ota());
    p.bind(binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}}));
    p.bind(binding("vib", kWheel, "wear", {{0, 1}, {50, 3}}));
    std::vector<AnalysisSnapshot> out;
    for (std::size_t i = 0; i < log.size(); i += batch) {
      for (std::size_t j = i; j < std::min(log.size(), i + batch); ++j) p.apply(log[j]);
    }
    out.push_back(p.snapshot(3.0));
    return out;
  };
  EXPECT_EQ(run(1), run(7));
}

TEST(Smooth, CentredAverage) {
  std::vector<AnalysisSnapshot> series(5);
  for (int i = 0; i < 5; ++i) {
    series[i].t = i;
    series[i].nominal_lambda = i + 1.0;
  }
  const auto out = smooth(series, 3);
  const double expected[] = {1.5, 2, 3, 4, 4.5};
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(out[i].nominal_lambda, expected[i]);
    EXPECT_EQ(out[i].t, i);
  }
  EXPECT_EQ(smooth(series, 1), series);
  EXPECT_THROW(smooth(series, 0), ValidationError);
}

TEST(Smooth, ConstantSeriesAndScaling) {
  std::vector<AnalysisSnapshot> series(7);
  for (auto& s : series) s.sensor_r = 0.25;
  for (std::size_t w : {2u, 3u, 4u, 9u}) {
    for (const auto& s : smooth(series, w)) EXPECT_EQ(s.sensor_r, 0.25);
  }
  for (int i = 0; i < 7; ++i) series[i].nominal_lambda = i * i;
  auto scaled = series;
  for (auto& s : scaled) s.nominal_lambda *= 4.0;
  const auto a = smooth(series, 4);
  const auto b = smooth(scaled, 4);
  for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(4.0 * a[i].nominal_lambda, b[i].nominal_lambda);
  EXPECT_EQ(a.size(), series.size());
}

TEST(Replay, FinalSnapshotMatchesLastReadings) {
  std::vector<SensorReading> log;
  for (int i = 0; i < 1000; ++i) log.push_back(reading(i % 3 ? "temp" : "vib", 0.1 * i, std::fmod(7.3 * i, 70.0)));
  const std::vector<SensorBinding> bindings{binding("temp", kMotor, "CSF", {{20, 1}, {60, 2}}),
                                            binding("vib", kWheel, "wear", {{0, 1}, {50, 3}})};
  ReplayConfig config;
  config.time_scale = 3600.0;
  const auto series = replay(ota(), bindings, log, config);
  ASSERT_EQ(series.size(), 101u);
  EXPECT_EQ(series.back().t, 100.0);

  // Offline: the last reading of each sensor decides its multiplier.
  double temp = 0, vib = 0;
  for (const auto& r : log) (r.sensor_id == "temp" ? temp : vib) = r.value;
  store::FactorOverrides overrides;
  overrides[kMotor]["CSF"] = bindings[0].curve(temp);
  overrides[kWheel]["wear"] = bindings[1].curve(vib);
  const auto tree = store::build_block(*ota(), overrides);
  EXPECT_EQ(series.back().sensor_lambda, rbd::system_hazard(tree, 100.0));
  EXPECT_EQ(series.back().sensor_r, rbd::system_reliability(tree, 100.0));
}

TEST(Replay, TaskPotcAndCsv) {
  ReplayConfig config;
  config.ticks = 3;
  config.time_scale = 3600.0;
  potc::TaskSpec task;
  task.duration = potc::Duration{1.0, potc::DurationUnit::kHour};
  config.task = task;
  const auto series = replay(ota(), {}, {}, config);
  ASSERT_EQ(series.size(), 3u);
  EXPECT_NEAR(*series[2].potc_nominal, 0.9994563655983582, 1e-15);
  const std::string csv = snapshots_csv(series);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "t_hours,nominal_lambda,nominal_R,sensor_lambda,sensor_R,potc_nominal,potc_sensor,failed");
  EXPECT_NE(csv.find("\n2.00000000e+00,5.43782224e-04,"), std::string::npos);
}

}  // namespace
}  // namespace phm::sensor
