// egress-sim: batch experiments, world validation and the session service.

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "CLI11.hpp"
#include "egress/error.hpp"
#include "egress/scenarios.hpp"
#include "egress/world.hpp"

#ifdef EGRESS_HAVE_SERVICE
#include "egress/server.hpp"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw egress::SimError(egress::ErrorCode::Io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

egress::World load_world_file(const std::string& path) {
  const auto text = read_file(path);
  try {
    return egress::parse_world(text);
  } catch (const egress::WorldError& e) {
    throw InvalidInput(fmt::format("{}: {}", path, e.what()));
  }
}

egress::ReportFormat format_or_throw(const std::string& name) {
  const auto f = egress::parse_report_format(name);
  if (!f) throw InvalidInput("unknown format '" + name + "' (csv, jsonl, table)");
  return *f;
}

struct RunArgs {
  std::string preset = "open_field";
  std::string world_file;
  std::uint32_t population = 15;
  std::uint32_t authorities = 0;
  bool no_exit_authority = false;
  std::uint32_t attempts = 10;
  std::uint64_t seed = 0;
  std::uint32_t deadline = 1000;
  unsigned threads = 0;
  std::string out;
  std::string format = "csv";
};

int cmd_run(const RunArgs& a) {
  const auto format = format_or_throw(a.format);
  egress::ExperimentPlan plan;
  if (!a.world_file.empty()) {
    plan.world = load_world_file(a.world_file);
    plan.preset = std::filesystem::path(a.world_file).stem().string();
    plan.population = a.population;
    plan.authorities = a.authorities;
    plan.attempts = a.attempts;
    plan.base_seed = a.seed;
  } else {
    plan = egress::make_plan(a.preset, a.population, a.authorities, a.attempts, a.seed);
  }
  plan.spawn_exit_authority = a.authorities > 0 && !a.no_exit_authority;
  plan.deadline = a.deadline;
  egress::check_config(plan.attempt_config(0));

  const auto report = egress::run_experiment(plan, a.threads);
  if (a.out.empty() || a.out == "-") {
    egress::write_report(report, format, std::cout);
  } else {
    egress::write_report_file(report, format, a.out);
  }
  return kExitOk;
}

struct GridArgs {
  std::uint32_t attempts = 10;
  std::uint64_t seed = 0;
  std::string out_dir = "grid";
  std::string format = "table";
  unsigned threads = 0;
};

int cmd_grid(const GridArgs& a) {
  const auto format = format_or_throw(a.format);
  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);

  const auto started = std::chrono::steady_clock::now();
  const auto cells = egress::experiment_grid();
  std::vector<egress::ExperimentReport> reports;
  reports.reserve(cells.size());
  for (const auto& cell : cells) {
    const auto plan =
        egress::make_plan(cell.preset, cell.population, cell.authorities, a.attempts, a.seed);
    reports.push_back(egress::run_experiment(plan, a.threads));
    const auto name = fmt::format("{}_{}_{}.{}", cell.preset, cell.population, cell.authorities,
                                  egress::report_extension(format));
    egress::write_report_file(reports.back(), format, (fs::path(a.out_dir) / name).string());
  }

  std::ofstream summary(fs::path(a.out_dir) / "summary.txt");
  for (const auto preset : egress::preset_names()) {
    egress::write_grid_summary(preset, cells, reports, summary);
    summary << '\n';
    egress::write_grid_summary(preset, cells, reports, std::cout);
    std::cout << '\n';
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  fmt::print(std::cerr, "{} cells x {} attempts in {:.1f} s; reports in {}\n", cells.size(),
             a.attempts, elapsed.count(), a.out_dir);
  return kExitOk;
}

int cmd_validate(const std::string& path) {
  egress::World world;
  try {
    world = load_world_file(path);
  } catch (const InvalidInput& e) {
    fmt::print(std::cerr, "invalid: {}\n", e.what());
    return kExitInvalid;
  }
  const auto problems = egress::validate(world);
  if (problems.empty()) {
    fmt::print("ok: {}x{}, {} exit patches, {} structure patches\n", world.width(),
               world.height(), world.count(egress::PatchKind::Exit),
               world.count(egress::PatchKind::Structure));
    return kExitOk;
  }
  for (const auto v : problems) fmt::print(std::cerr, "invalid: {}: {}\n", path, egress::violation_name(v));
  return kExitInvalid;
}

#ifdef EGRESS_HAVE_SERVICE
egress::service::Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& bind, double tick_rate, double max_events, unsigned idle_minutes) {
  egress::service::ServerOptions opts;
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw InvalidInput("--bind expects addr:port");
  opts.address = bind.substr(0, colon);
  try {
    const auto port = std::stoul(bind.substr(colon + 1));
    if (port > 65535) throw std::out_of_range("port");
    opts.port = static_cast<std::uint16_t>(port);
  } catch (const std::logic_error&) {
    throw InvalidInput("bad port in --bind '" + bind + "'");
  }
  if (tick_rate <= 0.0) throw InvalidInput("--tick-rate must be positive");
  opts.tick_rate = tick_rate;
  opts.max_events_per_second = max_events;
  opts.idle_timeout = std::chrono::minutes(idle_minutes);

  egress::service::Server server(opts);
  const auto port = server.listen();
  fmt::print("listening on {}:{} (WebSocket and newline JSON)\n", opts.address, port);
  std::cout.flush();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
  return kExitOk;
}
#endif

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evacuation simulator with emotional contagion"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run repeated attempts of one scenario");
  run_cmd->add_option("--preset", run.preset, "Preset world")->capture_default_str();
  run_cmd->add_option("--world", run.world_file, "World file instead of a preset");
  run_cmd->add_option("--population", run.population)->capture_default_str();
  run_cmd->add_option("--authorities", run.authorities)->capture_default_str();
  run_cmd->add_flag("--no-exit-authority", run.no_exit_authority,
                    "Do not place the extra authority on an exit");
  run_cmd->add_option("--attempts", run.attempts)->capture_default_str()->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run.seed, "Base seed; attempt i uses seed+i")->capture_default_str();
  run_cmd->add_option("--deadline", run.deadline, "Ticks before remaining citizens fail")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--threads", run.threads, "Worker threads (0: EGRESS_SIM_THREADS or all cores)");
  run_cmd->add_option("--out", run.out, "Output path (default stdout)");
  run_cmd->add_option("--format", run.format, "csv, jsonl or table")->capture_default_str();

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand("grid", "Run every preset at the standard population/authority cells");
  grid_cmd->add_option("--attempts", grid.attempts)->capture_default_str()->check(CLI::PositiveNumber);
  grid_cmd->add_option("--seed", grid.seed)->capture_default_str();
  grid_cmd->add_option("--out-dir", grid.out_dir)->capture_default_str();
  grid_cmd->add_option("--format", grid.format)->capture_default_str();
  grid_cmd->add_option("--threads", grid.threads);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a .world file");
  validate_cmd->add_option("file", validate_path)->required();

  std::string bind = "127.0.0.1:8765";
  double tick_rate = 10.0;
  double max_events = 30.0;
  unsigned idle_minutes = 30;
  auto* serve_cmd = app.add_subcommand("serve", "Serve interactive sessions");
  serve_cmd->add_option("--bind", bind)->capture_default_str();
  serve_cmd->add_option("--tick-rate", tick_rate, "Default ticks per second")->capture_default_str();
  serve_cmd->add_option("--max-events", max_events, "Snapshot events per second cap")
      ->capture_default_str();
  serve_cmd->add_option("--idle-minutes", idle_minutes, "Idle session timeout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*grid_cmd) return cmd_grid(grid);
    if (*validate_cmd) return cmd_validate(validate_path);
    if (*serve_cmd) {
#ifdef EGRESS_HAVE_SERVICE
      return cmd_serve(bind, tick_rate, max_events, idle_minutes);
#else
      fmt::print(std::cerr, "this build has no session service\n");
      return kExitRuntime;
#endif
    }
  } catch (const InvalidInput& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitInvalid;
  } catch (const egress::SimError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    const bool invalid = e.code() == egress::ErrorCode::InvalidConfig ||
                         e.code() == egress::ErrorCode::UnknownPreset ||
                         e.code() == egress::ErrorCode::NoExit ||
                         e.code() == egress::ErrorCode::NotEnoughEmptyPatches;
    return invalid ? kExitInvalid : kExitRuntime;
  } catch (const egress::ExperimentError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
