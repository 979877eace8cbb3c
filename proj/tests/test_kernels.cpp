#include <algorithm>
#include <cstring>

#include "doctest.h"
#include "egress/kernels/kernels.hpp"
#include "egress/rng.hpp"
#include "egress/spatial.hpp"

using namespace egress;
using egress::kernels::CodeCounts;
using egress::kernels::KernelTable;

namespace {

struct Cloud {
  std::vector<double> xs, ys;
  std::vector<std::uint8_t> codes;
};

Cloud make_cloud(Rng& rng, std::size_t n, bool lattice) {
  Cloud c;
  for (std::size_t i = 0; i < n; ++i) {
    if (lattice) {
      c.xs.push_back(static_cast<double>(rng.below(9)));
      c.ys.push_back(static_cast<double>(rng.below(9)));
    } else {
      c.xs.push_back(rng.uniform(-5, 65));
      c.ys.push_back(rng.uniform(-5, 65));
    }
    c.codes.push_back(static_cast<std::uint8_t>(rng.below(kernels::kCodeCount)));
  }
  return c;
}

}  // namespace

TEST_CASE("scalar table is always available and listed first") {
  const auto tables = kernels::available_tables();
  REQUIRE(!tables.empty());
  CHECK(tables.front() == &kernels::scalar_table());
  CHECK(kernels::scalar_table().name == "scalar");
  bool active_listed = false;
  for (const auto* t : tables) active_listed |= t == &kernels::active();
  CHECK(active_listed);
}

TEST_CASE("count_in_radius: every table matches the scalar reference") {
  Rng rng(99);
  const auto& ref = kernels::scalar_table();
  for (const auto* table : kernels::available_tables()) {
    CAPTURE(table->name);
    for (int trial = 0; trial < 500; ++trial) {
      const auto n = static_cast<std::size_t>(rng.below(70));
      const auto cloud = make_cloud(rng, n, trial % 2 == 0);
      const double cx = trial % 2 == 0 ? static_cast<double>(rng.below(9)) : rng.uniform(0, 60);
      const double cy = trial % 2 == 0 ? static_cast<double>(rng.below(9)) : rng.uniform(0, 60);
      const double r2 = trial % 2 == 0 ? 4.0 : rng.uniform(0, 400);
      CodeCounts want{}, got{};
      ref.count_in_radius(cloud.xs.data(), cloud.ys.data(), cloud.codes.data(), n, cx, cy, r2, want);
      table->count_in_radius(cloud.xs.data(), cloud.ys.data(), cloud.codes.data(), n, cx, cy, r2,
                             got);
      REQUIRE(got == want);
    }
  }
}

TEST_CASE("count_in_radius: reference agrees with a direct count") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cloud = make_cloud(rng, rng.below(50), true);
    CodeCounts got{};
    kernels::scalar_table().count_in_radius(cloud.xs.data(), cloud.ys.data(), cloud.codes.data(),
                                            cloud.xs.size(), 4, 4, 4.0, got);
    CodeCounts want{};
    for (std::size_t i = 0; i < cloud.xs.size(); ++i) {
      const double dx = cloud.xs[i] - 4, dy = cloud.ys[i] - 4;
      if (dx * dx + dy * dy <= 4.0) ++want[cloud.codes[i]];
    }
    REQUIRE(got == want);
  }
}

TEST_CASE("count_in_radius adds to existing counts") {
  const double xs[] = {0.0}, ys[] = {0.0};
  const std::uint8_t codes[] = {2};
  for (const auto* table : kernels::available_tables()) {
    CodeCounts counts{1, 1, 1, 1};
    table->count_in_radius(xs, ys, codes, 1, 0, 0, 0, counts);
    CHECK(counts == CodeCounts{1, 1, 2, 1});
  }
}

TEST_CASE("nearest_point: every table matches the scalar reference, ties included") {
  Rng rng(123);
  const auto& ref = kernels::scalar_table();
  for (const auto* table : kernels::available_tables()) {
    CAPTURE(table->name);
    for (int trial = 0; trial < 1000; ++trial) {
      const auto n = 1 + static_cast<std::size_t>(rng.below(80));
      const auto cloud = make_cloud(rng, n, trial % 2 == 0);
      const double cx = static_cast<double>(rng.below(9));
      const double cy = static_cast<double>(rng.below(9));
      const auto want = ref.nearest_point(cloud.xs.data(), cloud.ys.data(), n, cx, cy);
      const auto got = table->nearest_point(cloud.xs.data(), cloud.ys.data(), n, cx, cy);
      REQUIRE(got.index == want.index);
      REQUIRE(got.distance_sq == want.distance_sq);
    }
  }
}

TEST_CASE("nearest_point returns the first of equal minima") {
  std::vector<double> xs(20, 3.0), ys(20, 4.0);
  for (const auto* table : kernels::available_tables()) {
    const auto r = table->nearest_point(xs.data(), ys.data(), xs.size(), 0, 0);
    CHECK(r.index == 0);
    CHECK(r.distance_sq == 25.0);
  }
  xs[13] = 0.0;
  ys[13] = 0.0;
  xs[17] = 0.0;
  ys[17] = 0.0;
  for (const auto* table : kernels::available_tables()) {
    CHECK(table->nearest_point(xs.data(), ys.data(), xs.size(), 0, 0).index == 13);
  }
}

TEST_CASE("CellGrid: 3x3 runs cover every point within the cell size") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.below(200));
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = rng.uniform(0, 60);
      ys[i] = rng.uniform(0, 60);
    }
    const double radius = 2.0;
    CellGrid grid;
    grid.build(xs, ys, radius);
    REQUIRE(grid.order().size() == n);
    auto sorted = grid.order();
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(sorted[i] == i);

    for (std::size_t q = 0; q < n; ++q) {
      std::array<IndexRun, 3> runs{};
      const auto count = grid.query_runs(xs[q], ys[q], runs);
      std::vector<std::uint32_t> seen;
      for (std::size_t r = 0; r < count; ++r) {
        for (auto k = runs[r].begin; k < runs[r].end; ++k) seen.push_back(grid.order()[k]);
      }
      std::sort(seen.begin(), seen.end());
      for (std::size_t j = 0; j < n; ++j) {
        const double dx = xs[j] - xs[q], dy = ys[j] - ys[q];
        if (dx * dx + dy * dy <= radius * radius) {
          REQUIRE(std::binary_search(seen.begin(), seen.end(), static_cast<std::uint32_t>(j)));
        }
      }
    }
  }
}
