#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "egress/error.hpp"
#include "egress/scenarios.hpp"
#include "json.hpp"

namespace egress {

using nlohmann::json;

std::optional<ReportFormat> parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "jsonl" || name == "json-lines") return ReportFormat::JsonLines;
  if (name == "table" || name == "text-table") return ReportFormat::Table;
  return std::nullopt;
}

std::string_view report_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv: return "csv";
    case ReportFormat::JsonLines: return "jsonl";
    case ReportFormat::Table: return "txt";
  }
  return "txt";
}

namespace {

std::string population_band(std::uint32_t population) {
  switch (population) {
    case 15: return "LOW POPULATION";
    case 75: return "MEDIUM POPULATION";
    case 150: return "HIGH POPULATION";
    default: return "POPULATION";
  }
}

std::string authority_words(std::uint32_t n) {
  switch (n) {
    case 0: return "NO AUTHORITIES";
    case 4: return "FOUR AUTHORITIES";
    default: return fmt::format("{} AUTHORITIES", n);
  }
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

constexpr std::array<std::string_view, 5> kTableHeader{
    "Simulation Attempts", "Successful Evacuations", "Failed Evacuations",
    "Emotional Contagions", "Evacuation Duration"};

void write_csv(const ExperimentReport& r, std::ostream& out) {
  out << "attempt,successful,failed,contagions,duration\n";
  for (const auto& row : r.rows) {
    fmt::print(out, "{},{},{},{},{}\n", row.attempt, row.successful, row.failed, row.contagions,
               row.duration);
  }
  fmt::print(out, "mean,{:.2f},{:.2f},{:.2f},{:.2f}\n", r.mean.successful, r.mean.failed,
             r.mean.contagions, r.mean.duration);
  fmt::print(out, "success_pct,{:.2f},,,\n", r.success_pct);
}

void write_jsonl(const ExperimentReport& r, std::ostream& out) {
  out << json{{"type", "plan"},
              {"preset", r.preset},
              {"population", r.population},
              {"authorities", r.authorities},
              {"spawn_exit_authority", r.spawn_exit_authority},
              {"base_seed", r.base_seed},
              {"deadline", r.deadline},
              {"attempts", r.rows.size()}}
             .dump()
      << '\n';
  for (const auto& row : r.rows) {
    out << json{{"type", "attempt"},     {"attempt", row.attempt},
                {"successful", row.successful}, {"failed", row.failed},
                {"contagions", row.contagions}, {"duration", row.duration}}
               .dump()
        << '\n';
  }
  out << json{{"type", "mean"},
              {"successful", r.mean.successful},
              {"failed", r.mean.failed},
              {"contagions", r.mean.contagions},
              {"duration", r.mean.duration}}
             .dump()
      << '\n';
  out << json{{"type", "summary"}, {"success_pct", r.success_pct}}.dump() << '\n';
}

std::string trim_number(double v) {
  // Table cells drop trailing zeros like the published tables (13.7, 5, 3623.5).
  auto s = fmt::format("{:.2f}", v);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

void write_table(const ExperimentReport& r, std::ostream& out) {
  constexpr int kWidth = 24;
  out << report_title(r) << '\n';
  for (const auto h : kTableHeader) fmt::print(out, "{:<{}}", h, kWidth);
  out << '\n';
  for (const auto& row : r.rows) {
    fmt::print(out, "{:<{}}{:<{}}{:<{}}{:<{}}{:<{}}\n", fmt::format("#{}", row.attempt), kWidth,
               row.successful, kWidth, row.failed, kWidth, row.contagions, kWidth, row.duration,
               kWidth);
  }
  fmt::print(out, "{:<{}}{:<{}}{:<{}}{:<{}}{:<{}}\n", "Average (mean)", kWidth,
             trim_number(r.mean.successful), kWidth, trim_number(r.mean.failed), kWidth,
             trim_number(r.mean.contagions), kWidth, trim_number(r.mean.duration), kWidth);
  fmt::print(out, "{:<{}}{:.2f}% of Citizens\n", "", kWidth, r.success_pct);
}

}  // namespace

std::string report_title(const ExperimentReport& r) {
  return fmt::format("{}: {} ({}) WITH {} ({})", upper(r.preset), population_band(r.population),
                     r.population, authority_words(r.authorities), r.authorities);
}

void write_report(const ExperimentReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Csv: write_csv(report, out); break;
    case ReportFormat::JsonLines: write_jsonl(report, out); break;
    case ReportFormat::Table: write_table(report, out); break;
  }
}

void write_report_file(const ExperimentReport& report, ReportFormat format,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimError(ErrorCode::Io, "cannot open '" + path + "' for writing");
  write_report(report, format, out);
  out.flush();
  if (!out) throw SimError(ErrorCode::Io, "failed writing '" + path + "'");
}

ExperimentReport read_report_jsonl(std::istream& in) {
  ExperimentReport r;
  std::string line;
  bool saw_plan = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    const auto type = j.at("type").get<std::string>();
    if (type == "plan") {
      saw_plan = true;
      r.preset = j.at("preset").get<std::string>();
      r.population = j.at("population").get<std::uint32_t>();
      r.authorities = j.at("authorities").get<std::uint32_t>();
      r.spawn_exit_authority = j.at("spawn_exit_authority").get<bool>();
      r.base_seed = j.at("base_seed").get<std::uint64_t>();
      r.deadline = j.at("deadline").get<std::uint32_t>();
    } else if (type == "attempt") {
      r.rows.push_back({j.at("attempt").get<std::uint32_t>(), j.at("successful").get<std::uint32_t>(),
                        j.at("failed").get<std::uint32_t>(), j.at("contagions").get<std::uint64_t>(),
                        j.at("duration").get<std::uint32_t>()});
    } else if (type == "mean") {
      r.mean = {j.at("successful").get<double>(), j.at("failed").get<double>(),
                j.at("contagions").get<double>(), j.at("duration").get<double>()};
    } else if (type == "summary") {
      r.success_pct = j.at("success_pct").get<double>();
    }
  }
  if (!saw_plan) throw SimError(ErrorCode::Io, "report stream has no plan line");
  return r;
}

void write_grid_summary(std::string_view preset, const std::vector<GridCell>& cells,
                        const std::vector<ExperimentReport>& reports, std::ostream& out) {
  constexpr int kLabel = 24;
  constexpr int kCol = 38;
  fmt::print(out, "SCENARIO \"{}\"\n", preset);
  fmt::print(out, "{:<{}}", "", kLabel);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].preset == preset) fmt::print(out, "{:<{}}", cells[i].label, kCol);
  }
  out << '\n';
  const auto row = [&](std::string_view label, auto field) {
    fmt::print(out, "{:<{}}", label, kLabel);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].preset == preset) fmt::print(out, "{:<{}}", trim_number(field(reports[i])), kCol);
    }
    out << '\n';
  };
  row("Successful Evacuations", [](const ExperimentReport& r) { return r.mean.successful; });
  row("Failed Evacuations", [](const ExperimentReport& r) { return r.mean.failed; });
  row("Emotional Contagions", [](const ExperimentReport& r) { return r.mean.contagions; });
  row("Evacuation Duration", [](const ExperimentReport& r) { return r.mean.duration; });
  row("Success %", [](const ExperimentReport& r) { return r.success_pct; });
}

}  // namespace egress
