#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

namespace phm::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// Holds model.json, bindings.json, tasks.json and usage.json. A missing
  /// model.json is created from the bundled OTA example.
  std::string model_dir;
  double tick_period_s = 1.0;
  double time_scale = 1.0;
  std::size_t window = 1;
  /// Events kept per stream before the oldest are dropped.
  std::size_t stream_buffer = 4096;
  /// Optional directory of static assets (the browser console), served at /.
  std::string static_dir;
};

/// Startup problem (unreadable model directory, busy port).
class StartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// HTTP/JSON front end. All state changes run on one writer thread; request
/// handlers and stream readers only see immutable snapshots.
class Service {
 public:
  /// Loads the model directory. Throws StartupError.
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the port. Throws StartupError.
  int bind();
  /// Serves until stop(); call after bind().
  void listen();
  /// Stops a running session (persisting usage hours) and the listener.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocking entry point used by `phm serve`: binds, prints the address,
/// serves until SIGINT/SIGTERM. Returns the process exit code (2 on startup
/// failure).
int run_service(const ServiceConfig& config);

}  // namespace phm::service
