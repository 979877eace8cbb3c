#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "egress/error.hpp"
#include "egress/scenarios.hpp"

using namespace egress;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string render(const ExperimentReport& r, ReportFormat f) {
  std::ostringstream out;
  write_report(r, f, out);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ExperimentReport sample_report() {
  ExperimentReport r;
  r.preset = "open_field";
  r.population = 15;
  r.authorities = 0;
  r.rows = {{1, 15, 0, 62, 301}, {2, 14, 1, 75, 1000}};
  aggregate(r);
  return r;
}

int gap(const Rect& a, const Rect& b) {
  const int gx = std::max(b.x - (a.x + a.w), a.x - (b.x + b.w));
  const int gy = std::max(b.y - (a.y + a.h), a.y - (b.y + b.h));
  return std::max(gx, gy);
}

}  // namespace

TEST_CASE("preset names") {
  const std::vector<std::string_view> want{"open_field", "village", "town", "city"};
  CHECK(preset_names() == want);
  try {
    load_preset("metropolis");
    FAIL("expected UnknownPreset");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::UnknownPreset);
  }
}

TEST_CASE("preset layouts") {
  const std::map<std::string_view, std::size_t> buildings{
      {"open_field", 0}, {"village", 3}, {"town", 6}, {"city", 9}};
  for (const auto name : preset_names()) {
    CAPTURE(name);
    const auto p = load_preset(name);
    CHECK(p.world.width() == 61);
    CHECK(p.world.height() == 61);
    CHECK(validate(p.world).empty());
    CHECK(p.building_count == buildings.at(name));
    CHECK(p.world.count(PatchKind::Exit) == 50);

    bool solid = false;
    const auto rects = find_blocks(p.world, PatchKind::Structure, &solid);
    CHECK(solid);
    CHECK(rects.size() == buildings.at(name));

    REQUIRE(p.exit_blocks.size() == 1);
    const auto& e = p.exit_blocks[0];
    CHECK(std::min(e.w, e.h) == 5);
    CHECK(std::max(e.w, e.h) == 10);
    const bool on_edge = e.x == 0 || e.y == 0 || e.x + e.w == 61 || e.y + e.h == 61;
    CHECK(on_edge);

    // Buildings leave corridors of at least two patches to each other, the edges and the exit.
    for (std::size_t i = 0; i < rects.size(); ++i) {
      const auto& r = rects[i];
      CHECK(r.x >= 2);
      CHECK(r.y >= 2);
      CHECK(r.x + r.w <= 59);
      CHECK(r.y + r.h <= 59);
      CHECK(gap(r, e) >= 2);
      for (std::size_t j = i + 1; j < rects.size(); ++j) CHECK(gap(r, rects[j]) >= 2);
    }
  }
  CHECK(load_preset("open_field").world.count(PatchKind::Structure) == 0);
}

TEST_CASE("village fixture matches the frozen golden") {
  const auto golden = slurp(std::filesystem::path(EGRESS_GOLDEN_DIR) / "village.world");
  CHECK(preset_fixture("village") == golden);
  CHECK(serialize_world(load_preset("village").world) == golden);
}

TEST_CASE("plan seeds and spawn flag") {
  const auto plan = make_plan("town", 75, 4, 3, 100);
  CHECK(plan.attempt_config(0).seed == 100);
  CHECK(plan.attempt_config(2).seed == 102);
  CHECK(plan.spawn_exit_authority);
  CHECK_FALSE(make_plan("town", 75, 0).spawn_exit_authority);
  CHECK(plan.attempt_config(1).world == load_preset("town").world);
}

TEST_CASE("single attempt: mean row equals the attempt row") {
  const auto r = run_experiment(make_plan("village", 15, 0, 1, 3), 1);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.mean.successful == r.rows[0].successful);
  CHECK(r.mean.failed == r.rows[0].failed);
  CHECK(r.mean.contagions == static_cast<double>(r.rows[0].contagions));
  CHECK(r.mean.duration == r.rows[0].duration);
}

TEST_CASE("success percentage formula") {
  const auto r = sample_report();
  CHECK(r.mean.successful == 14.5);
  CHECK(r.mean.failed == 0.5);
  CHECK(r.mean.contagions == 68.5);
  CHECK(r.success_pct == doctest::Approx(14.5 / 15.0 * 100.0));
}

TEST_CASE("experiments do not depend on thread count") {
  const auto plan = make_plan("city", 75, 4, 6, 11);
  const auto one = run_experiment(plan, 1);
  CHECK(run_experiment(plan, 3) == one);
  CHECK(render(run_experiment(plan, 2), ReportFormat::Csv) == render(one, ReportFormat::Csv));
}

TEST_CASE("csv: header, attempt rows, mean and percentage") {
  const auto r = run_experiment(make_plan("open_field", 15, 0, 10, 0), 1);
  const auto lines = lines_of(render(r, ReportFormat::Csv));
  REQUIRE(lines.size() == 13);
  CHECK(lines[0] == "attempt,successful,failed,contagions,duration");
  CHECK(lines[1].rfind("1,", 0) == 0);
  CHECK(lines[11].rfind("mean,", 0) == 0);
  CHECK(lines[12].rfind("success_pct,", 0) == 0);
}

TEST_CASE("text table: caption and column order") {
  const auto lines = lines_of(render(sample_report(), ReportFormat::Table));
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "OPEN_FIELD: LOW POPULATION (15) WITH NO AUTHORITIES (0)");
  const auto& h = lines[1];
  const auto a = h.find("Simulation Attempts");
  const auto b = h.find("Successful Evacuations");
  const auto c = h.find("Failed Evacuations");
  const auto d = h.find("Emotional Contagions");
  const auto e = h.find("Evacuation Duration");
  CHECK(a < b);
  CHECK(b < c);
  CHECK(c < d);
  CHECK(d < e);
  CHECK(e != std::string::npos);
  CHECK(lines[2].rfind("#1", 0) == 0);
  CHECK(lines[4].rfind("Average (mean)", 0) == 0);
  CHECK(lines[4].find("68.5") != std::string::npos);
  CHECK(lines[5].find("96.67% of Citizens") != std::string::npos);
}

TEST_CASE("json lines round-trip") {
  const auto r = run_experiment(make_plan("town", 75, 4, 4, 8), 1);
  std::istringstream in(render(r, ReportFormat::JsonLines));
  CHECK(read_report_jsonl(in) == r);
}

TEST_CASE("report formats") {
  CHECK(parse_report_format("csv") == ReportFormat::Csv);
  CHECK(parse_report_format("jsonl") == ReportFormat::JsonLines);
  CHECK(parse_report_format("table") == ReportFormat::Table);
  CHECK_FALSE(parse_report_format("xml"));
  CHECK(report_extension(ReportFormat::Table) == "txt");
}

TEST_CASE("identical plans give byte-identical report files") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto plan = make_plan("village", 75, 0, 3, 5);
  const auto a = (dir / "egress_report_a.csv").string();
  const auto b = (dir / "egress_report_b.csv").string();
  write_report_file(run_experiment(plan, 1), ReportFormat::Csv, a);
  write_report_file(run_experiment(plan, 2), ReportFormat::Csv, b);
  CHECK(slurp(a) == slurp(b));
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("report file errors are Io") {
  try {
    write_report_file(sample_report(), ReportFormat::Csv, "/nonexistent-dir/x.csv");
    FAIL("expected Io");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
}

TEST_CASE("golden CSV reports") {
  struct Case {
    const char* preset;
    std::uint32_t pop, auth;
    std::uint64_t seed;
    const char* file;
  };
  const Case cases[] = {{"open_field", 15, 0, 7, "open_field_15_0_seed7.csv"},
                        {"city", 150, 4, 1, "city_150_4_seed1.csv"},
                        {"village", 75, 4, 42, "village_75_4_seed42.csv"}};
  for (const auto& c : cases) {
    CAPTURE(c.file);
    const auto r = run_experiment(make_plan(c.preset, c.pop, c.auth, 5, c.seed), 1);
    CHECK(render(r, ReportFormat::Csv) ==
          slurp(std::filesystem::path(EGRESS_GOLDEN_DIR) / c.file));
  }
}

TEST_CASE("grid has five cells per preset") {
  const auto cells = experiment_grid();
  CHECK(cells.size() == 20);
  CHECK(cells[0].population == 15);
  CHECK(cells[0].authorities == 0);
  CHECK(cells[1].label == "Medium Population/Four Authorities");
}

TEST_CASE("authorities help at high population") {
  const auto with = run_experiment(make_plan("open_field", 150, 4, 30, 0));
  const auto without = run_experiment(make_plan("open_field", 150, 0, 30, 0));
  CHECK(with.success_pct >= without.success_pct);
}
