#include "phm/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "phm/documents.hpp"
#include "phm/format.hpp"
#include "phm/model.hpp"
#include "phm/potc.hpp"
#include "phm/rbd.hpp"
#include "phm/sensor_pipeline.hpp"
#include "phm/service.hpp"

namespace phm::cli {

namespace {

// Failure already reported to the user; carries the exit code.
struct Exit {
  int code;
};

// Hours from "1.5h", "1800s" or a bare number of hours.
double parse_hours(const std::string& text, const char* flag) {
  double v = 0.0;
  if (parse_double(text, v)) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError(flag, "must be a non-negative number of hours");
    }
    return v;
  }
  const potc::Duration d = potc::parse_duration(text);
  return d.unit == potc::DurationUnit::kHour ? d.value : d.value / 3600.0;
}

std::string default_model_path() {
  if (const char* dir = std::getenv("PHM_MODEL_DIR"); dir && *dir) {
    return std::string(dir) + "/model.json";
  }
  return {};
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  store::RobotModel load(const std::string& path) {
    if (path.empty()) {
      err_ << "phm: no model file given and PHM_MODEL_DIR is not set\n";
      throw Exit{kExitUsage};
    }
    try {
      return store::load_model(path);
    } catch (const SchemaError& e) {
      err_ << path << ':' << e.line() << ": " << (e.pointer().empty() ? "<document>" : e.pointer())
           << ": " << e.message() << '\n';
    } catch (const ValidationError& e) {
      for (const auto& d : e.diagnostics()) err_ << path << ": " << to_string(d) << '\n';
    }
    throw Exit{kExitInvalid};
  }

  // Runs `fn`, turning library errors into diagnostics and exit code 1.
  template <class F>
  int guarded(F fn) {
    try {
      fn();
      return kExitOk;
    } catch (const Exit& e) {
      return e.code;
    } catch (const SchemaError& e) {
      err_ << "phm: line " << e.line() << ": " << (e.pointer().empty() ? "<document>" : e.pointer())
           << ": " << e.message() << '\n';
    } catch (const ValidationError& e) {
      for (const auto& d : e.diagnostics()) err_ << "phm: " << to_string(d) << '\n';
    } catch (const std::exception& e) {
      err_ << "phm: " << e.what() << '\n';
    }
    return kExitInvalid;
  }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
};

struct TaskFlags {
  std::string distance;
  std::string speed;
  std::string time;

  void add(CLI::App* cmd) {
    cmd->add_option("--distance", distance, "Task distance, e.g. 3.6km or 3600m");
    cmd->add_option("--speed", speed, "Speed, e.g. 3.6kmh or 1mps");
    cmd->add_option("--time", time, "Task duration, e.g. 1800s or 0.5h");
  }
  bool given() const { return !distance.empty() || !time.empty(); }
  potc::TaskSpec spec() const {
    potc::TaskSpec s;
    s.task_id = "cli";
    if (!distance.empty()) s.distance = potc::parse_distance(distance);
    if (!speed.empty()) s.speed = potc::parse_speed(speed);
    if (!time.empty()) s.duration = potc::parse_duration(time);
    return s;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Runner runner(out, err);
  CLI::App app{"Reliability, POTC and RUL analysis for robot models", "phm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string model_path = default_model_path();
  auto model_arg = [&](CLI::App* cmd) {
    cmd->add_option("model", model_path, "Model document (default: $PHM_MODEL_DIR/model.json)");
  };

  auto* validate = app.add_subcommand("validate", "Check a model document");
  model_arg(validate);

  std::string at = "0";
  auto* hazard = app.add_subcommand("hazard", "System hazard rate per hour");
  model_arg(hazard);
  hazard->add_option("--at", at, "Usage time, e.g. 100h or 3600s (default 0)");

  std::string until;
  std::string step;
  auto* reliability = app.add_subcommand("reliability", "Reliability curve as CSV");
  model_arg(reliability);
  reliability->add_option("--until", until, "Last time point, e.g. 1000h")->required();
  reliability->add_option("--step", step, "Grid spacing, e.g. 100h")->required();

  std::string elapsed = "0";
  TaskFlags task;
  auto* potc_cmd = app.add_subcommand("potc", "Probability of completing a task");
  model_arg(potc_cmd);
  potc_cmd->add_option("--elapsed", elapsed, "Usage hours before the task (default 0)");
  task.add(potc_cmd);

  auto* mttf = app.add_subcommand("mttf", "Mean time to failure in hours");
  model_arg(mttf);

  double threshold = potc::kDefaultRulThreshold;
  auto* rul = app.add_subcommand("rul", "Remaining useful life in hours");
  model_arg(rul);
  rul->add_option("--elapsed", elapsed, "Usage hours so far (default 0)");
  rul->add_option("--threshold", threshold, "Conditional reliability threshold (default e^-1)")
      ->check(CLI::Range(0.0, 1.0));

  std::string bindings_path;
  std::string log_path;
  std::string output_path;
  sensor::ReplayConfig replay_config;
  std::size_t ticks = 0;
  TaskFlags replay_task;
  auto* replay = app.add_subcommand("replay", "Replay a reading log into a snapshot CSV");
  model_arg(replay);
  replay->add_option("--bindings", bindings_path, "Sensor bindings document");
  replay->add_option("--log", log_path, "Line-delimited reading log")->required();
  replay->add_option("--tick-period", replay_config.tick_period_s, "Seconds of log time per tick")
      ->check(CLI::PositiveNumber);
  replay->add_option("--time-scale", replay_config.time_scale, "Usage hours per log hour")
      ->check(CLI::PositiveNumber);
  replay->add_option("--start", replay_config.start_hours, "Usage hours at the first tick")
      ->check(CLI::NonNegativeNumber);
  auto* ticks_opt = replay->add_option("--ticks", ticks, "Number of ticks (default: cover the log)");
  replay->add_option("--window", replay_config.window, "Smoothing window (default 1)")
      ->check(CLI::PositiveNumber);
  replay->add_option("-o,--output", output_path, "Write the CSV here instead of stdout");
  replay_task.add(replay);

  bool parallel_batteries = false;
  auto* example = app.add_subcommand("example", "Print the bundled OTA model");
  example->add_flag("--parallel-batteries", parallel_batteries,
                    "Put the four batteries in a parallel group");
  example->add_option("-o,--output", output_path, "Write the document here instead of stdout");

  service::ServiceConfig serve_config;
  if (const char* dir = std::getenv("PHM_MODEL_DIR")) serve_config.model_dir = dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--host", serve_config.host, "Listen address (default 127.0.0.1)");
  serve->add_option("--port", serve_config.port, "Port, 0 for any (default 8080)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--model-dir", serve_config.model_dir, "Model directory (default $PHM_MODEL_DIR)");
  serve->add_option("--tick-period", serve_config.tick_period_s, "Seconds between ticks (default 1)")
      ->check(CLI::PositiveNumber);
  serve->add_option("--time-scale", serve_config.time_scale, "Usage hours per wall-clock hour")
      ->check(CLI::PositiveNumber);
  serve->add_option("--static-dir", serve_config.static_dir, "Console assets served at /");
  serve->add_option("--window", serve_config.window, "Smoothing window for snapshot exports")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto write_output = [&](const std::string& text) {
    if (output_path.empty()) {
      out << text;
      return;
    }
    store::save_atomically(output_path, text);
  };

  if (*validate) {
    return runner.guarded([&] {
      runner.load(model_path);
      out << "OK\n";
    });
  }
  if (*hazard) {
    return runner.guarded([&] {
      const auto tree = store::build_block(runner.load(model_path));
      out << format_number(rbd::system_hazard(tree, parse_hours(at, "--at"))) << '\n';
    });
  }
  if (*reliability) {
    return runner.guarded([&] {
      const auto tree = store::build_block(runner.load(model_path));
      const double last = parse_hours(until, "--until");
      const double dt = parse_hours(step, "--step");
      if (!(dt > 0.0)) throw ValidationError("--step", "must be positive");
      const auto rows = static_cast<std::size_t>(std::floor(last / dt * (1.0 + 1e-12))) + 1;
      out << "t_hours,reliability\n";
      for (std::size_t k = 0; k < rows; ++k) {
        const double t = static_cast<double>(k) * dt;
        out << format_number(t) << ',' << format_number(rbd::system_reliability(tree, t)) << '\n';
      }
    });
  }
  if (*potc_cmd) {
    return runner.guarded([&] {
      if (!task.given()) throw ValidationError("task", "give --distance with --speed, or --time");
      const auto tree = store::build_block(runner.load(model_path));
      const auto p = potc::predict_potc(tree, parse_hours(elapsed, "--elapsed"), task.spec());
      out << format_number(p.potc) << '\n';
    });
  }
  if (*mttf) {
    return runner.guarded([&] {
      const auto tree = store::build_block(runner.load(model_path));
      out << format_number(rbd::system_mttf(tree)) << '\n';
    });
  }
  if (*rul) {
    return runner.guarded([&] {
      const auto tree = store::build_block(runner.load(model_path));
      const double hours = potc::rul(tree, parse_hours(elapsed, "--elapsed"), threshold);
      out << (std::isfinite(hours) ? format_number(hours) : std::string("inf")) << '\n';
    });
  }
  if (*replay) {
    return runner.guarded([&] {
      auto model = std::make_shared<const store::RobotModel>(runner.load(model_path));
      std::vector<sensor::SensorBinding> bindings;
      if (!bindings_path.empty()) bindings = store::parse_bindings(store::read_file(bindings_path));
      const auto log = store::parse_reading_log(store::read_file(log_path));
      if (ticks_opt->count() > 0) replay_config.ticks = ticks;
      if (replay_task.given()) replay_config.task = replay_task.spec();
      write_output(sensor::snapshots_csv(sensor::replay(model, bindings, log, replay_config)));
    });
  }
  if (*example) {
    return runner.guarded(
        [&] { write_output(store::serialize_model(store::ota_example(parallel_batteries))); });
  }
  if (*serve) {
    if (serve_config.model_dir.empty()) {
      err << "phm serve: give --model-dir or set PHM_MODEL_DIR\n";
      return kExitStartup;
    }
    return service::run_service(serve_config);
  }
  return kExitUsage;
}

}  // namespace phm::cli
