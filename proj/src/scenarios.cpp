#include "egress/scenarios.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "egress/error.hpp"
#include "preset_fixtures.hpp"

namespace egress {

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> names;
  for (const auto& f : fixtures::kPresets) names.push_back(f.name);
  return names;
}

std::string_view preset_fixture(std::string_view name) {
  for (const auto& f : fixtures::kPresets) {
    if (f.name == name) return f.text;
  }
  throw SimError(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
}

std::vector<Rect> find_blocks(const World& world, PatchKind kind, bool* solid) {
  const int w = world.width();
  const int h = world.height();
  std::vector<char> seen(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
  std::vector<Rect> out;
  if (solid) *solid = true;

  std::vector<Coord> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (seen[idx(x, y)] || world.at({x, y}) != kind) continue;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      std::size_t cells = 0;
      stack.push_back({x, y});
      seen[idx(x, y)] = 1;
      while (!stack.empty()) {
        const auto c = stack.back();
        stack.pop_back();
        ++cells;
        x0 = std::min(x0, c.x);
        x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y);
        y1 = std::max(y1, c.y);
        constexpr std::array<Coord, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        for (const auto d : kSteps) {
          const Coord n{c.x + d.x, c.y + d.y};
          if (!world.in_bounds(n) || seen[idx(n.x, n.y)] || world.at(n) != kind) continue;
          seen[idx(n.x, n.y)] = 1;
          stack.push_back(n);
        }
      }
      const Rect r{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      if (solid && cells != static_cast<std::size_t>(r.w) * static_cast<std::size_t>(r.h)) {
        *solid = false;
      }
      out.push_back(r);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Rect& a, const Rect& b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
  return out;
}

ScenarioPreset load_preset(std::string_view name) {
  ScenarioPreset p;
  p.name = std::string(name);
  p.world = parse_world(preset_fixture(name));
  p.building_count = find_blocks(p.world, PatchKind::Structure).size();
  p.exit_blocks = find_blocks(p.world, PatchKind::Exit);
  return p;
}

SimConfig ExperimentPlan::attempt_config(std::uint32_t attempt) const {
  SimConfig c;
  c.world = world;
  c.initial_population = population;
  c.initial_authorities = authorities;
  c.spawn_exit_authority = spawn_exit_authority;
  c.deadline = deadline;
  c.speed_profile = speed_profile;
  c.seed = base_seed + attempt;
  return c;
}

ExperimentPlan make_plan(std::string_view preset, std::uint32_t population,
                         std::uint32_t authorities, std::uint32_t attempts,
                         std::uint64_t base_seed) {
  ExperimentPlan plan;
  plan.preset = std::string(preset);
  plan.world = load_preset(preset).world;
  plan.population = population;
  plan.authorities = authorities;
  plan.spawn_exit_authority = authorities > 0;
  plan.attempts = attempts;
  plan.base_seed = base_seed;
  return plan;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("EGRESS_SIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void aggregate(ExperimentReport& report) {
  report.mean = {};
  report.success_pct = 0.0;
  if (report.rows.empty()) return;
  for (const auto& r : report.rows) {
    report.mean.successful += r.successful;
    report.mean.failed += r.failed;
    report.mean.contagions += static_cast<double>(r.contagions);
    report.mean.duration += r.duration;
  }
  const auto n = static_cast<double>(report.rows.size());
  report.mean.successful /= n;
  report.mean.failed /= n;
  report.mean.contagions /= n;
  report.mean.duration /= n;
  const double total = report.mean.successful + report.mean.failed;
  report.success_pct = total > 0.0 ? report.mean.successful / total * 100.0 : 0.0;
}

ExperimentReport run_experiment(const ExperimentPlan& plan, unsigned threads) {
  if (plan.attempts < 1) throw SimError(ErrorCode::InvalidConfig, "attempts must be >= 1");
  ExperimentReport report;
  report.preset = plan.preset;
  report.population = plan.population;
  report.authorities = plan.authorities;
  report.spawn_exit_authority = plan.spawn_exit_authority;
  report.base_seed = plan.base_seed;
  report.deadline = plan.deadline;
  report.rows.resize(plan.attempts);

  std::atomic<std::uint32_t> next{0};
  std::mutex failure_mutex;
  std::uint32_t failed_attempt = UINT32_MAX;
  std::string failure;

  const auto worker = [&] {
    for (std::uint32_t i = next++; i < plan.attempts; i = next++) {
      try {
        const auto stats = run_to_completion(plan.attempt_config(i));
        report.rows[i] = {i + 1, stats.successful_escapes, stats.failed_evacuations,
                          stats.total_contagions, stats.duration};
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (i + 1 < failed_attempt) {
          failed_attempt = i + 1;
          failure = e.what();
        }
      }
    }
  };

  if (threads == 0) threads = default_thread_count();
  threads = std::min<unsigned>(threads, plan.attempts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  if (failed_attempt != UINT32_MAX) {
    throw ExperimentError(failed_attempt,
                          "attempt " + std::to_string(failed_attempt) + " failed: " + failure);
  }
  aggregate(report);
  return report;
}

std::vector<GridCell> experiment_grid() {
  std::vector<GridCell> cells;
  for (const auto name : preset_names()) {
    const std::string p(name);
    cells.push_back({p, 15, 0, "Low Population"});
    cells.push_back({p, 75, 4, "Medium Population/Four Authorities"});
    cells.push_back({p, 75, 0, "Medium Population/No Authorities"});
    cells.push_back({p, 150, 4, "High Population/Four Authorities"});
    cells.push_back({p, 150, 0, "High Population/No Authorities"});
  }
  return cells;
}

}  // namespace egress
