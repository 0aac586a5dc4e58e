#include "phm/service.hpp"

#include <pthread.h>
#include <signal.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <ctime>
#include <deque>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "documents_json.hpp"
#include "httplib.h"
#include "phm/documents.hpp"
#include "phm/format.hpp"
#include "phm/model.hpp"
#include "phm/potc.hpp"
#include "phm/sensor_pipeline.hpp"

namespace phm::service {

namespace fs = std::filesystem;
using detail::Json;
using sensor::AnalysisSnapshot;

namespace {

// Runs submitted jobs one at a time on a dedicated thread.
class Strand {
 public:
  Strand() : thread_([this] { run(); }) {}
  ~Strand() { shutdown(); }

  template <class F>
  auto call(F fn) -> decltype(fn()) {
    using R = decltype(fn());
    auto task = std::make_shared<std::packaged_task<R()>>(std::move(fn));
    auto result = task->get_future();
    {
      std::lock_guard lock(mutex_);
      if (closed_) throw std::runtime_error("service is shutting down");
      jobs_.emplace_back([task] { (*task)(); });
    }
    cv_.notify_one();
    return result.get();
  }

  void shutdown() {
    {
      std::lock_guard lock(mutex_);
      if (closed_) return;
      closed_ = true;
    }
    cv_.notify_one();
    if (thread_.joinable()) thread_.join();
  }

 private:
  void run() {
    for (;;) {
      std::function<void()> job;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return closed_ || !jobs_.empty(); });
        if (jobs_.empty()) return;
        job = std::move(jobs_.front());
        jobs_.pop_front();
      }
      job();
    }
  }

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> jobs_;
  bool closed_ = false;
  std::thread thread_;
};

struct Event {
  std::uint64_t seq = 0;
  AnalysisSnapshot snapshot;
};

// Bounded broadcast buffer. Slow readers lose the oldest events and learn
// how many through the dropped count.
class Hub {
 public:
  explicit Hub(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

  void publish(const AnalysisSnapshot& s) {
    {
      std::lock_guard lock(mutex_);
      events_.push_back({next_seq_++, s});
      if (events_.size() > capacity_) events_.pop_front();
    }
    cv_.notify_all();
  }

  std::uint64_t next_seq() const {
    std::lock_guard lock(mutex_);
    return next_seq_;
  }

  /// Events with seq >= from, waiting up to `timeout` for the first one.
  /// Returns false once closed and drained.
  bool read(std::uint64_t& from, std::vector<Event>& out, std::uint64_t& dropped,
            std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return closed_ || next_seq_ > from; });
    if (!events_.empty() && events_.front().seq > from) {
      dropped += events_.front().seq - from;
      from = events_.front().seq;
    }
    for (const auto& e : events_) {
      if (e.seq >= from) out.push_back(e);
    }
    if (!out.empty()) from = out.back().seq + 1;
    return !(closed_ && out.empty());
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    cv_.notify_all();
  }

 private:
  const std::size_t capacity_;
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Event> events_;
  std::uint64_t next_seq_ = 0;
  bool closed_ = false;
};

enum class SessionState { kIdle, kRunning, kStopped };

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kIdle: return "idle";
    case SessionState::kRunning: return "running";
    case SessionState::kStopped: return "stopped";
  }
  return "idle";
}

struct Session {
  std::string id;
  SessionState state = SessionState::kIdle;
  bool manual = false;
  sensor::ReplayConfig clock;
  std::string started_at;
  std::size_t ticks = 0;
  std::vector<AnalysisSnapshot> snapshots;
};

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// HTTP-level failure with a status code.
struct HttpError {
  int status;
  std::string message;
};

Json diagnostics_json(const std::vector<Diagnostic>& list) {
  Json errors = Json::array();
  for (const auto& d : list) errors.push_back(Json{{"path", d.path}, {"message", d.message}});
  return errors;
}

Json schema_error_json(const SchemaError& e) {
  return Json::array({Json{{"path", e.pointer()}, {"line", e.line()}, {"message", e.message()}}});
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(detail::dump_compact(body), "application/json");
}

double query_number(const httplib::Request& req, const char* key, double fallback) {
  if (!req.has_param(key)) return fallback;
  double v = 0.0;
  if (!parse_double(req.get_param_value(key), v)) {
    throw HttpError{400, std::string("query parameter '") + key + "' is not a number"};
  }
  return v;
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  fs::path dir;
  httplib::Server server;
  Hub hub;
  std::atomic<bool> stopping{false};

  // Writer-owned state; touched only from jobs running on `strand`.
  std::shared_ptr<const store::RobotModel> model;
  std::unique_ptr<sensor::Pipeline> pipeline;
  std::vector<potc::TaskRecord> history;
  std::optional<std::size_t> active_task;
  double usage_hours = 0.0;
  Session session;
  std::uint64_t session_counter = 0;

  // Wall-clock ticker. `ticker_owner` guards the thread object itself.
  std::mutex ticker_owner;
  std::mutex ticker_mutex;
  std::condition_variable ticker_cv;
  bool ticker_stop = false;
  std::thread ticker;

  // Declared last so it is destroyed first, before the state its jobs use.
  Strand strand;

  explicit Impl(ServiceConfig c) : config(std::move(c)), hub(config.stream_buffer) {
    if (config.model_dir.empty()) throw StartupError("no model directory given");
    dir = config.model_dir;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
      throw StartupError("model directory '" + config.model_dir + "' is not a readable directory");
    }
    if (!(config.tick_period_s > 0.0) || !(config.time_scale > 0.0) || config.window == 0) {
      throw StartupError("tick period, time scale and window must be positive");
    }
    try {
      load_state();
    } catch (const std::exception& e) {
      throw StartupError("cannot load model directory '" + config.model_dir + "': " + e.what());
    }
    routes();
    if (!config.static_dir.empty() && !server.set_mount_point("/", config.static_dir)) {
      throw StartupError("static directory '" + config.static_dir + "' is not a readable directory");
    }
  }

  ~Impl() { stop_ticker(); }

  // ---- persistence -------------------------------------------------------

  fs::path file(const char* name) const { return dir / name; }

  void load_state() {
    if (fs::exists(file("model.json"))) {
      model = std::make_shared<const store::RobotModel>(
          store::load_model(file("model.json").string()));
    } else {
      model = std::make_shared<const store::RobotModel>(store::ota_example());
      store::save_atomically(file("model.json").string(), store::serialize_model(*model));
    }
    pipeline = std::make_unique<sensor::Pipeline>(model);
    if (fs::exists(file("bindings.json"))) {
      for (const auto& b : store::parse_bindings(store::read_file(file("bindings.json").string()))) {
        pipeline->bind(b);
      }
    }
    if (fs::exists(file("tasks.json"))) {
      history = store::parse_task_history(store::read_file(file("tasks.json").string()));
    }
    if (fs::exists(file("usage.json"))) {
      const detail::Document doc(store::read_file(file("usage.json").string()));
      detail::ObjectReader r(doc, doc.root(), "");
      if (r.string("schema") != "phm-usage/1") r.fail("schema", "expected 'phm-usage/1'");
      usage_hours = r.number("usage_hours");
      r.finish();
    }
  }

  void save_bindings() {
    store::save_atomically(file("bindings.json").string(),
                           store::serialize_bindings(pipeline->bindings()));
  }
  void save_history() {
    store::save_atomically(file("tasks.json").string(), store::serialize_task_history(history));
  }
  void save_usage() {
    Json j = Json::object();
    j["schema"] = "phm-usage/1";
    j["usage_hours"] = usage_hours;
    store::save_atomically(file("usage.json").string(), detail::dump_canonical(j));
  }

  // ---- analysis ----------------------------------------------------------

  const potc::TaskSpec* active_spec() const {
    return active_task ? &history[*active_task].spec : nullptr;
  }

  // Usage hours "now": the latest tick of a running session, else the total.
  double elapsed() const {
    if (session.state == SessionState::kRunning && !session.snapshots.empty()) {
      return session.snapshots.back().t;
    }
    return usage_hours;
  }

  void tick() {
    const double t = sensor::tick_hours(session.clock, session.ticks);
    const AnalysisSnapshot s = pipeline->snapshot(t, active_spec());
    session.snapshots.push_back(s);
    ++session.ticks;
    hub.publish(s);
  }

  Json status_json() const {
    Json j = Json::object();
    j["session_id"] = session.id.empty() ? Json(nullptr) : Json(session.id);
    j["state"] = std::string(to_string(session.state));
    j["mode"] = session.manual ? "manual" : "clock";
    j["tick_period_s"] = session.clock.tick_period_s;
    j["time_scale"] = session.clock.time_scale;
    j["window"] = session.clock.window;
    j["started_at"] = session.started_at.empty() ? Json(nullptr) : Json(session.started_at);
    j["ticks"] = session.ticks;
    j["usage_hours"] = usage_hours;
    j["elapsed_hours"] = elapsed();
    const auto& c = pipeline->counters();
    j["readings"] = Json{{"applied", c.applied},
                         {"ignored_unbound", c.ignored_unbound},
                         {"rejected_non_finite", c.rejected_non_finite},
                         {"dropped_out_of_order", c.dropped_out_of_order}};
    j["bindings"] = pipeline->bindings().size();
    return j;
  }

  Json start(const std::string& body) {
    if (session.state == SessionState::kRunning) throw HttpError{409, "analysis already running"};
    Session next;
    next.clock.tick_period_s = config.tick_period_s;
    next.clock.time_scale = config.time_scale;
    next.clock.window = config.window;
    if (body.find_first_not_of(" \t\r\n") != std::string::npos) {
      const detail::Document doc(body);
      detail::ObjectReader r(doc, doc.root(), "");
      next.clock.tick_period_s = r.number_or("tick_period_s", next.clock.tick_period_s);
      next.clock.time_scale = r.number_or("time_scale", next.clock.time_scale);
      next.clock.window = static_cast<std::size_t>(
          r.integer_or("window", static_cast<long long>(next.clock.window)));
      if (const Json* mode = r.find("mode")) {
        if (*mode == "manual") {
          next.manual = true;
        } else if (*mode != "clock") {
          r.fail("mode", "expected 'clock' or 'manual'");
        }
      }
      r.finish();
      if (!(next.clock.tick_period_s > 0.0)) r.fail("tick_period_s", "must be positive");
      if (!(next.clock.time_scale > 0.0)) r.fail("time_scale", "must be positive");
      if (next.clock.window == 0) r.fail("window", "must be >= 1");
    }
    next.clock.start_hours = usage_hours;
    next.id = "s" + std::to_string(++session_counter);
    next.state = SessionState::kRunning;
    next.started_at = utc_now();
    // A session starts from fresh multipliers so it matches an offline replay.
    auto fresh = std::make_unique<sensor::Pipeline>(model);
    for (const auto& b : pipeline->bindings()) fresh->bind(b);
    pipeline = std::move(fresh);
    session = std::move(next);
    return status_json();
  }

  Json stop_session() {
    if (session.state != SessionState::kRunning) throw HttpError{409, "analysis is not running"};
    session.state = SessionState::kStopped;
    if (!session.snapshots.empty()) usage_hours = session.snapshots.back().t;
    save_usage();
    return status_json();
  }

  // ---- tasks ---------------------------------------------------------------

  Json predict(const std::string& body, bool dry_run) {
    const auto specs = store::parse_task_request(body);
    double at = elapsed();
    double chained_nominal = 1.0;
    double chained_sensor = 1.0;
    Json predictions = Json::array();
    std::vector<potc::TaskRecord> records;
    for (const auto& spec : specs) {
      potc::TaskRecord rec;
      rec.spec = spec;
      rec.elapsed_at_start = at;
      const auto nominal = potc::predict_potc(pipeline->nominal_tree(), at, spec);
      rec.predicted_potc_nominal = nominal.potc;
      rec.predicted_potc_sensor = potc::predict_potc(pipeline->sensor_tree(), at, spec).potc;
      rec.predicted_duration = nominal.duration_hours;
      rec.predicted_distance = potc::task_distance_m(spec);
      chained_nominal *= rec.predicted_potc_nominal;
      chained_sensor *= rec.predicted_potc_sensor;
      Json p = Json::object();
      p["task_id"] = spec.task_id;
      p["elapsed_at_start"] = at;
      p["potc_nominal"] = rec.predicted_potc_nominal;
      p["potc_sensor"] = rec.predicted_potc_sensor;
      p["duration_hours"] = rec.predicted_duration;
      p["distance_m"] = rec.predicted_distance ? Json(*rec.predicted_distance) : Json(nullptr);
      predictions.push_back(p);
      records.push_back(std::move(rec));
      at += nominal.duration_hours;
    }
    if (!dry_run && !records.empty()) {
      const std::size_t first = history.size();
      history.insert(history.end(), records.begin(), records.end());
      if (!active_task) active_task = first;
      save_history();
    }
    return Json{{"predictions", predictions},
                {"chained_potc_nominal", chained_nominal},
                {"chained_potc_sensor", chained_sensor}};
  }

  Json actual(const std::string& body) {
    const detail::Document doc(body);
    detail::ObjectReader r(doc, doc.root(), "");
    const std::string id = r.string("task_id");
    const potc::Duration measured = store::detail_json::read_duration(r, "task_time");
    std::optional<potc::Distance> distance;
    if (r.has("distance")) distance = store::detail_json::read_distance(r, "distance");
    r.finish();
    std::optional<std::size_t> index;
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (history[i].spec.task_id == id && !history[i].completed()) {
        index = i;
        break;
      }
    }
    if (!index) throw HttpError{404, "no pending task '" + id + "'"};
    potc::TaskSpec only_time;
    only_time.duration = measured;
    const double hours = potc::task_duration(only_time);
    auto& rec = history[*index];
    rec.actual_duration = hours;
    rec.actual_potc_nominal =
        potc::actual_potc(pipeline->nominal_tree(), rec.elapsed_at_start, hours);
    rec.actual_potc_sensor = potc::actual_potc(pipeline->sensor_tree(), rec.elapsed_at_start, hours);
    if (distance) {
      rec.actual_distance =
          distance->unit == potc::DistanceUnit::kKilometer ? distance->value * 1000.0 : distance->value;
    }
    const Json out = store::detail_json::write_record(rec);
    if (active_task == index) {
      active_task.reset();
      for (std::size_t i = *index + 1; i < history.size(); ++i) {
        if (!history[i].completed()) {
          active_task = i;
          break;
        }
      }
    }
    save_history();
    return out;
  }

  // ---- plumbing ------------------------------------------------------------

  void start_ticker() {
    std::lock_guard owner(ticker_owner);
    stop_ticker_locked();
    {
      std::lock_guard lock(ticker_mutex);
      ticker_stop = false;
    }
    const double period = session.clock.tick_period_s;
    const std::string id = session.id;
    ticker = std::thread([this, period, id] {
      const auto origin = std::chrono::steady_clock::now();
      for (std::uint64_t k = 0;; ++k) {
        const auto due = origin + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      std::chrono::duration<double>(period * static_cast<double>(k)));
        {
          std::unique_lock lock(ticker_mutex);
          if (ticker_cv.wait_until(lock, due, [&] { return ticker_stop; })) return;
        }
        try {
          const bool alive = strand.call([&] {
            if (session.id != id || session.state != SessionState::kRunning) return false;
            tick();
            return true;
          });
          if (!alive) return;
        } catch (const std::exception& e) {
          std::cerr << "phm: tick failed: " << e.what() << '\n';
          return;
        }
      }
    });
  }

  void stop_ticker() {
    std::lock_guard owner(ticker_owner);
    stop_ticker_locked();
  }

  void stop_ticker_locked() {
    {
      std::lock_guard lock(ticker_mutex);
      ticker_stop = true;
    }
    ticker_cv.notify_all();
    if (ticker.joinable() && ticker.get_id() != std::this_thread::get_id()) ticker.join();
  }

  // Runs `fn` on the writer thread, mapping failures to HTTP responses.
  template <class F>
  void guarded(httplib::Response& res, F fn) {
    try {
      reply(res, 200, strand.call(std::move(fn)));
    } catch (const HttpError& e) {
      reply(res, e.status, Json{{"error", e.message}});
    } catch (const SchemaError& e) {
      reply(res, 400, Json{{"error", "malformed document"}, {"errors", schema_error_json(e)}});
    } catch (const ValidationError& e) {
      reply(res, 400, Json{{"error", "validation failed"}, {"errors", diagnostics_json(e.diagnostics())}});
    } catch (const SystemFailedError& e) {
      reply(res, 422, Json{{"error", e.what()}});
    } catch (const Error& e) {
      reply(res, 400, Json{{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, Json{{"error", e.what()}});
    }
  }

  void stream(const httplib::Request& req, httplib::Response& res,
              std::function<std::pair<Json, Json>(const AnalysisSnapshot&)> project) {
    struct Cursor {
      std::uint64_t next = 0;
      std::uint64_t dropped = 0;
      std::optional<std::uint64_t> remaining;
    };
    auto cursor = std::make_shared<Cursor>();
    try {
      cursor->next = req.has_param("from")
                         ? static_cast<std::uint64_t>(query_number(req, "from", 0.0))
                         : hub.next_seq();
      if (req.has_param("limit")) {
        cursor->remaining = static_cast<std::uint64_t>(query_number(req, "limit", 0.0));
      }
    } catch (const HttpError& e) {
      reply(res, e.status, Json{{"error", e.message}});
      return;
    }
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, cursor, project](std::size_t, httplib::DataSink& sink) {
          if (cursor->remaining && *cursor->remaining == 0) {
            sink.done();
            return true;
          }
          std::vector<Event> events;
          const bool open = hub.read(cursor->next, events, cursor->dropped,
                                     std::chrono::milliseconds(200));
          for (const auto& e : events) {
            auto [nominal, sensed] = project(e.snapshot);
            Json line = Json::object();
            line["seq"] = e.seq;
            line["t"] = e.snapshot.t;
            line["nominal"] = nominal;
            line["sensor"] = sensed;
            line["failed"] = e.snapshot.failed;
            line["dropped"] = cursor->dropped;
            const std::string text = detail::dump_compact(line) + "\n";
            if (!sink.write(text.data(), text.size())) return false;
            if (cursor->remaining && --*cursor->remaining == 0) break;
          }
          if (!open || stopping || (cursor->remaining && *cursor->remaining == 0)) sink.done();
          return true;
        });
  }

  void routes() {
    server.new_task_queue = [] { return new httplib::ThreadPool(32); };

    server.Get("/api/model", [this](const httplib::Request&, httplib::Response& res) {
      const std::string text = strand.call([this] { return store::serialize_model(*model); });
      res.set_content(text, "application/json");
    });
    server.Put("/api/model", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        if (session.state == SessionState::kRunning) {
          throw HttpError{409, "stop the analysis before replacing the model"};
        }
        auto next = std::make_shared<const store::RobotModel>(store::parse_model(req.body));
        auto fresh = std::make_unique<sensor::Pipeline>(next);
        Json dropped = Json::array();
        for (const auto& b : pipeline->bindings()) {
          if (sensor::validate_binding(*next, b).empty()) {
            fresh->bind(b);
          } else {
            dropped.push_back(store::detail_json::write_binding(b));
          }
        }
        store::save_atomically(file("model.json").string(), store::serialize_model(*next));
        model = std::move(next);
        pipeline = std::move(fresh);
        save_bindings();
        return Json{{"ok", true}, {"dropped_bindings", dropped}};
      });
    });
    server.Post("/api/model/validate", [this](const httplib::Request& req, httplib::Response& res) {
      Json out;
      try {
        store::parse_model(req.body);
        out = Json{{"ok", true}, {"errors", Json::array()}};
      } catch (const SchemaError& e) {
        out = Json{{"ok", false}, {"errors", schema_error_json(e)}};
      } catch (const ValidationError& e) {
        out = Json{{"ok", false}, {"errors", diagnostics_json(e.diagnostics())}};
      }
      reply(res, 200, out);
    });

    server.Post("/api/analysis/start", [this](const httplib::Request& req, httplib::Response& res) {
      bool clock = false;
      guarded(res, [&] {
        Json status = start(req.body);
        clock = !session.manual;
        return status;
      });
      if (res.status == 200 && clock) start_ticker();
    });
    server.Post("/api/analysis/stop", [this](const httplib::Request&, httplib::Response& res) {
      stop_ticker();
      guarded(res, [&] { return stop_session(); });
    });
    server.Get("/api/analysis/status", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] { return status_json(); });
    });
    server.Post("/api/analysis/tick", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        if (session.state != SessionState::kRunning || !session.manual) {
          throw HttpError{409, "ticks can only be requested in a running manual session"};
        }
        const double count = query_number(req, "count", 1.0);
        if (!(count >= 1.0) || count != std::floor(count)) {
          throw HttpError{400, "count must be a positive integer"};
        }
        for (double i = 0; i < count; ++i) tick();
        return status_json();
      });
    });
    server.Get("/api/analysis/snapshots", [this](const httplib::Request& req, httplib::Response& res) {
      const bool csv = req.get_param_value("format") == "csv";
      auto series = strand.call([this] { return sensor::smooth(session.snapshots, session.clock.window); });
      if (csv) {
        res.set_content(sensor::snapshots_csv(series), "text/csv");
        return;
      }
      Json list = Json::array();
      for (const auto& s : series) list.push_back(store::detail_json::write_snapshot(s));
      reply(res, 200, Json{{"snapshots", list}});
    });

    server.Get("/api/stream/hazard", [this](const httplib::Request& req, httplib::Response& res) {
      stream(req, res, [](const AnalysisSnapshot& s) {
        return std::pair{number_or_null(s.nominal_lambda), number_or_null(s.sensor_lambda)};
      });
    });
    server.Get("/api/stream/reliability", [this](const httplib::Request& req, httplib::Response& res) {
      stream(req, res, [](const AnalysisSnapshot& s) {
        return std::pair{Json(s.nominal_r), Json(s.sensor_r)};
      });
    });
    server.Get("/api/stream/potc", [this](const httplib::Request& req, httplib::Response& res) {
      stream(req, res, [](const AnalysisSnapshot& s) {
        return std::pair{s.potc_nominal ? Json(*s.potc_nominal) : Json(nullptr),
                         s.potc_sensor ? Json(*s.potc_sensor) : Json(nullptr)};
      });
    });

    server.Get("/api/sensor/binding", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        Json list = Json::array();
        for (const auto& b : pipeline->bindings()) list.push_back(store::detail_json::write_binding(b));
        return Json{{"bindings", list}};
      });
    });
    server.Post("/api/sensor/binding", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        pipeline->bind(store::parse_binding(req.body));
        save_bindings();
        return Json{{"ok", true}, {"bindings", pipeline->bindings().size()}};
      });
    });
    server.Delete("/api/sensor/binding", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        pipeline->clear_bindings();
        save_bindings();
        return Json{{"ok", true}, {"bindings", 0}};
      });
    });
    server.Post("/api/sensor/reading", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        for (const auto& r : store::parse_reading_log(req.body)) pipeline->apply(r);
        return status_json()["readings"];
      });
    });

    server.Post("/api/task/predict", [this](const httplib::Request& req, httplib::Response& res) {
      const bool dry_run = req.has_param("dry_run") && req.get_param_value("dry_run") != "0";
      guarded(res, [&] { return predict(req.body, dry_run); });
    });
    server.Post("/api/task/actual", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { return actual(req.body); });
    });
    server.Get("/api/task/history", [this](const httplib::Request&, httplib::Response& res) {
      const std::string text = strand.call([this] { return store::serialize_task_history(history); });
      res.set_content(text, "application/json");
    });

    server.Get("/api/rul", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        const double threshold = query_number(req, "threshold", potc::kDefaultRulThreshold);
        const double at = query_number(req, "elapsed", elapsed());
        return Json{{"elapsed", at},
                    {"threshold", threshold},
                    {"rul_nominal", number_or_null(potc::rul(pipeline->nominal_tree(), at, threshold))},
                    {"rul_sensor", number_or_null(potc::rul(pipeline->sensor_tree(), at, threshold))}};
      });
    });
  }

  void shutdown() {
    if (stopping.exchange(true)) return;
    stop_ticker();
    try {
      strand.call([this] {
        if (session.state == SessionState::kRunning) stop_session();
        return 0;
      });
    } catch (const std::exception& e) {
      std::cerr << "phm: could not persist usage hours: " << e.what() << '\n';
    }
    hub.close();
    server.stop();
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() {
  impl_->shutdown();
}

int Service::bind() {
  auto& c = impl_->config;
  int port = -1;
  if (c.port == 0) {
    port = impl_->server.bind_to_any_port(c.host);
  } else if (impl_->server.bind_to_port(c.host, c.port)) {
    port = c.port;
  }
  if (port < 0) {
    throw StartupError("cannot listen on " + c.host + ":" + std::to_string(c.port));
  }
  return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->shutdown(); }

int run_service(const ServiceConfig& config) {
  // Block the signals before any thread starts; a dedicated waiter handles them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::unique_ptr<Service> service;
  int port = 0;
  try {
    service = std::make_unique<Service>(config);
    port = service->bind();
  } catch (const std::exception& e) {
    std::cerr << "phm serve: " << e.what() << '\n';
    return 2;
  }
  std::cout << "listening on http://" << config.host << ':' << port << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service->stop();
  });
  service->listen();
  // listen() also returns when the server fails; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  service.reset();
  return 0;
}

}  // namespace phm::service
