#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egress/engine.hpp"
#include "egress/world.hpp"

namespace egress {

/// Axis-aligned patch rectangle; (x, y) is the south-west corner.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct ScenarioPreset {
  std::string name;
  World world;
  std::size_t building_count = 0;
  std::vector<Rect> exit_blocks;
};

/// open_field, village, town, city
std::vector<std::string_view> preset_names();

/// The shipped `.world` fixture text for a preset. Throws SimError(UnknownPreset).
std::string_view preset_fixture(std::string_view name);

ScenarioPreset load_preset(std::string_view name);

/// 4-connected components of `kind`, as bounding rectangles sorted by (y, x). `solid`
/// is set to false if any component does not fill its bounding rectangle.
std::vector<Rect> find_blocks(const World& world, PatchKind kind, bool* solid = nullptr);

struct ExperimentPlan {
  std::string preset = "open_field";
  World world;
  std::uint32_t population = 15;
  std::uint32_t authorities = 0;
  bool spawn_exit_authority = false;
  std::uint32_t attempts = 10;
  std::uint64_t base_seed = 0;
  std::uint32_t deadline = 1000;
  SpeedProfile speed_profile;

  /// Engine config for attempt i (seed = base_seed + i).
  SimConfig attempt_config(std::uint32_t attempt) const;
};

/// Plan for a named preset. The extra authority on an exit is spawned only when
/// `authorities` > 0, so "no authorities" cells really have none.
ExperimentPlan make_plan(std::string_view preset, std::uint32_t population,
                         std::uint32_t authorities, std::uint32_t attempts = 10,
                         std::uint64_t base_seed = 0);

struct AttemptRow {
  std::uint32_t attempt = 0;  // 1-based
  std::uint32_t successful = 0;
  std::uint32_t failed = 0;
  std::uint64_t contagions = 0;
  std::uint32_t duration = 0;
  friend bool operator==(const AttemptRow&, const AttemptRow&) = default;
};

struct MeanRow {
  double successful = 0.0;
  double failed = 0.0;
  double contagions = 0.0;
  double duration = 0.0;
  friend bool operator==(const MeanRow&, const MeanRow&) = default;
};

struct ExperimentReport {
  std::string preset;
  std::uint32_t population = 0;
  std::uint32_t authorities = 0;
  bool spawn_exit_authority = false;
  std::uint64_t base_seed = 0;
  std::uint32_t deadline = 0;
  std::vector<AttemptRow> rows;
  MeanRow mean;
  double success_pct = 0.0;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

/// Raised when one attempt fails; carries the attempt index (1-based).
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::uint32_t attempt, const std::string& what)
      : std::runtime_error(what), attempt_(attempt) {}
  std::uint32_t attempt() const noexcept { return attempt_; }

 private:
  std::uint32_t attempt_;
};

/// Worker count from EGRESS_SIM_THREADS, else hardware concurrency (at least 1).
unsigned default_thread_count();

/// Mean row and success percentage from attempt rows.
void aggregate(ExperimentReport& report);

/// Runs every attempt (in parallel when threads > 1) and aggregates. The result does
/// not depend on the thread count.
ExperimentReport run_experiment(const ExperimentPlan& plan, unsigned threads = 0);

enum class ReportFormat { Csv, JsonLines, Table };
std::optional<ReportFormat> parse_report_format(std::string_view name);
std::string_view report_extension(ReportFormat f);

void write_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);
void write_report_file(const ExperimentReport& report, ReportFormat format,
                       const std::string& path);
ExperimentReport read_report_jsonl(std::istream& in);

/// Caption in the style of the result tables, e.g. "OPEN_FIELD: LOW POPULATION (15) WITH NO
/// AUTHORITIES (0)".
std::string report_title(const ExperimentReport& report);

struct GridCell {
  std::string preset;
  std::uint32_t population = 0;
  std::uint32_t authorities = 0;
  std::string label;  // e.g. "Medium Population/Four Authorities"
};

/// Five cells per preset (low; medium and high, each with four and with no authorities).
std::vector<GridCell> experiment_grid();

/// One column per cell, rows Successful/Failed/Contagions/Duration (means).
void write_grid_summary(std::string_view preset, const std::vector<GridCell>& cells,
                        const std::vector<ExperimentReport>& reports, std::ostream& out);

}  // namespace egress
