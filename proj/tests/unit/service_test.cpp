#include <gtest/gtest.h>

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "phm/model.hpp"
#include "phm/service.hpp"

namespace phm::service {
namespace {

using nlohmann::json;

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("phm_service_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
    start();
  }
  void TearDown() override {
    stop();
    std::filesystem::remove_all(dir_);
  }

  void start(double tick_period = 0.05) {
    ServiceConfig config;
    config.port = 0;
    config.model_dir = dir_.string();
    config.tick_period_s = tick_period;
    service_ = std::make_unique<Service>(config);
    port_ = service_->bind();
    thread_ = std::thread([this] { service_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(10, 0);
  }
  void stop() {
    service_->stop();
    thread_.join();
    service_.reset();
  }

  json post(const std::string& path, const std::string& body, int expect = 200) {
    auto res = client_->Post(path, body, "application/json");
    EXPECT_TRUE(res);
    if (!res) return {};
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return json::parse(res->body);
  }
  json get(const std::string& path) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 200) << res->body;
    return json::parse(res->body);
  }

  std::filesystem::path dir_;
  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServiceTest, ModelReadBack) {
  auto res = client_->Get("/api/model");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, store::serialize_model(store::ota_example()));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "model.json"));
}

TEST_F(ServiceTest, ModelValidateAndPut) {
  const auto bad = post("/api/model/validate", R"({"schema": "phm-model/1", "name": "x"})");
  EXPECT_FALSE(bad["ok"].get<bool>());
  EXPECT_EQ(bad["errors"][0]["path"], "");
  auto res = client_->Put("/api/model", "{", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);
  const std::string parallel = store::serialize_model(store::ota_example(true));
  res = client_->Put("/api/model", parallel, "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200) << res->body;
  EXPECT_EQ(client_->Get("/api/model")->body, parallel);
}

TEST_F(ServiceTest, StreamTicksAtPeriod) {
  post("/api/analysis/start", "");
  const auto begin = std::chrono::steady_clock::now();
  std::vector<double> arrivals;
  std::string buffer;
  client_->Get("/api/stream/reliability?limit=6", [&](const char* data, std::size_t n) {
    buffer.append(data, n);
    for (std::size_t pos; (pos = buffer.find('\n')) != std::string::npos;) {
      buffer.erase(0, pos + 1);
      arrivals.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count());
    }
    return true;
  });
  post("/api/analysis/stop", "");
  ASSERT_EQ(arrivals.size(), 6u);
  const double mean = (arrivals.back() - arrivals.front()) / 5.0;
  EXPECT_NEAR(mean, 0.05, 0.2 * 0.05);
}

TEST_F(ServiceTest, StreamEventsAreOrderedAndBounded) {
  post("/api/analysis/start", R"({"mode": "manual", "tick_period_s": 1, "time_scale": 3600})");
  client_->Post("/api/analysis/tick?count=5", "", "application/json");
  auto res = client_->Get("/api/stream/reliability?from=0&limit=5");
  ASSERT_TRUE(res);
  std::istringstream lines(res->body);
  std::string line;
  double previous = 1.0;
  std::uint64_t seq = 0;
  while (std::getline(lines, line)) {
    const auto e = json::parse(line);
    EXPECT_EQ(e["seq"].get<std::uint64_t>(), seq++);
    EXPECT_LE(e["nominal"].get<double>(), previous);
    previous = e["nominal"].get<double>();
    EXPECT_EQ(e["dropped"], 0);
  }
  EXPECT_EQ(seq, 5u);
}

TEST_F(ServiceTest, BindingsAndReadings) {
  const auto rejected = client_->Post("/api/sensor/binding",
                                      R"({"sensor_id": "t", "target_path": "power/ghost",
                                          "target_factor": "CSF", "curve": [[0, 1]]})",
                                      "application/json");
  ASSERT_TRUE(rejected);
  EXPECT_EQ(rejected->status, 400);
  post("/api/sensor/binding", R"({"sensor_id": "t", "target_path": "Mobility/DC Motor/DC Motor",
                                  "target_factor": "CSF", "curve": [[20, 1], [60, 2]]})");
  const auto counts = post("/api/sensor/reading",
                           "{\"timestamp\": 1, \"sensor_id\": \"t\", \"value\": 60}\n"
                           "{\"timestamp\": 2, \"sensor_id\": \"u\", \"value\": 1}\n"
                           "{\"timestamp\": 3, \"sensor_id\": \"t\", \"value\": \"nan\"}\n");
  EXPECT_EQ(counts["applied"], 1);
  EXPECT_EQ(counts["ignored_unbound"], 1);
  EXPECT_EQ(counts["rejected_non_finite"], 1);
  const auto rul = get("/api/rul?threshold=0.5");
  EXPECT_LT(rul["rul_sensor"].get<double>(), rul["rul_nominal"].get<double>());
  EXPECT_TRUE(std::filesystem::exists(dir_ / "bindings.json"));
}

TEST_F(ServiceTest, TaskPredictActualHistory) {
  const auto p = post("/api/task/predict", R"({"robot_task_list": [
      {"task_id": "a", "distance": "3.6km", "speed": "3.6kmh"},
      {"task_id": "b", "task_time": "1h"}]})");
  const double a = p["predictions"][0]["potc_nominal"];
  const double b = p["predictions"][1]["potc_nominal"];
  EXPECT_NEAR(a, 0.9994563655983582, 1e-15);
  EXPECT_EQ(p["predictions"][1]["elapsed_at_start"], 1.0);
  EXPECT_DOUBLE_EQ(p["chained_potc_nominal"].get<double>(), a * b);
  const auto actual = post("/api/task/actual", R"({"task_id": "a", "task_time": "2h"})");
  EXPECT_LT(actual["actual"]["potc_nominal"].get<double>(), a);
  post("/api/task/actual", R"({"task_id": "zzz", "task_time": "2h"})", 404);
  const auto history = get("/api/task/history");
  EXPECT_EQ(history["robot_task_list"].size(), 2u);
  post("/api/task/predict?dry_run=1", R"({"task_id": "c", "task_time": "1h"})");
  EXPECT_EQ(get("/api/task/history")["robot_task_list"].size(), 2u);
}

TEST_F(ServiceTest, UsageHoursSurviveRestart) {
  post("/api/analysis/start", R"({"mode": "manual", "tick_period_s": 1, "time_scale": 3600})");
  client_->Post("/api/analysis/tick?count=11", "", "application/json");
  EXPECT_EQ(post("/api/analysis/stop", "")["usage_hours"], 10.0);
  const std::string curve = client_->Get("/api/analysis/snapshots?format=csv")->body;
  stop();
  start();
  EXPECT_EQ(get("/api/analysis/status")["usage_hours"], 10.0);
  // A new session continues from the persisted usage hours.
  post("/api/analysis/start", R"({"mode": "manual", "tick_period_s": 1, "time_scale": 3600})");
  client_->Post("/api/analysis/tick", "", "application/json");
  const auto snapshots = get("/api/analysis/snapshots");
  EXPECT_EQ(snapshots["snapshots"][0]["t"], 10.0);
  EXPECT_EQ(post("/api/analysis/start", "", 409)["error"], "analysis already running");
}

TEST(ServiceStartup, ServesStaticAssets) {
  const auto dir = std::filesystem::temp_directory_path() / ("phm_static_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir / "www");
  store::save_atomically((dir / "www" / "index.html").string(), "<html></html>");
  ServiceConfig config;
  config.port = 0;
  config.model_dir = dir.string();
  config.static_dir = (dir / "www").string();
  Service service(config);
  const int port = service.bind();
  std::thread server([&] { service.listen(); });
  httplib::Client client("127.0.0.1", port);
  const auto page = client.Get("/index.html");
  const auto api = client.Get("/api/analysis/status");
  service.stop();
  server.join();
  std::filesystem::remove_all(dir);
  ASSERT_TRUE(page && api);
  EXPECT_EQ(page->body, "<html></html>");
  EXPECT_EQ(api->status, 200);
  config.static_dir = "/nonexistent/www";
  EXPECT_THROW(Service{config}, StartupError);
}

TEST(ServiceStartup, UnreadableDirectory) {
  ServiceConfig config;
  config.model_dir = "/nonexistent/phm";
  EXPECT_THROW(Service{config}, StartupError);
  EXPECT_EQ(run_service(config), 2);
}

}  // namespace
}  // namespace phm::service
