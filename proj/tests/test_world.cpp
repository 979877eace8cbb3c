#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "egress/error.hpp"
#include "egress/rng.hpp"
#include "egress/world.hpp"
#include "oracles.hpp"

using namespace egress;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WorldError::Kind parse_error_kind(std::string_view text) {
  try {
    parse_world(text);
  } catch (const WorldError& e) {
    return e.kind();
  }
  FAIL("expected a parse error");
  return WorldError::Kind::EmptyWorld;
}

}  // namespace

TEST_CASE("parse: minimal world with one exit") {
  const auto w = parse_world("...\n.E.\n...");
  CHECK(w.width() == 3);
  CHECK(w.height() == 3);
  REQUIRE(w.exits().size() == 1);
  CHECK(w.exits()[0] == Coord{1, 1});
  CHECK(validate(w).empty());
}

TEST_CASE("parse: first line is the top row") {
  const auto w = parse_world("E..\n...\n..#");
  CHECK(w.at({0, 2}) == PatchKind::Exit);
  CHECK(w.at({2, 0}) == PatchKind::Structure);
}

TEST_CASE("parse: every glyph maps to its kind") {
  const auto w = parse_world(".#EAH");
  CHECK(w.at({0, 0}) == PatchKind::Empty);
  CHECK(w.at({1, 0}) == PatchKind::Structure);
  CHECK(w.at({2, 0}) == PatchKind::Exit);
  CHECK(w.at({3, 0}) == PatchKind::AuthorityPost);
  CHECK(w.at({4, 0}) == PatchKind::Hazard);
}

TEST_CASE("parse: errors") {
  CHECK(parse_error_kind("...\n....\n...") == WorldError::Kind::RaggedGrid);
  CHECK(parse_error_kind("") == WorldError::Kind::EmptyWorld);
  CHECK(parse_error_kind("..x\n...") == WorldError::Kind::BadGlyph);
  try {
    parse_world("...\n..x");
    FAIL("expected BadGlyph");
  } catch (const WorldError& e) {
    REQUIRE(e.where());
    CHECK(*e.where() == Coord{2, 0});
  }
}

TEST_CASE("parse: CRLF and trailing newline are accepted") {
  const auto a = parse_world("..E\r\n...\r\n");
  const auto b = parse_world("..E\n...");
  CHECK(a == b);
}

TEST_CASE("validate: a world without exits is not runnable") {
  CHECK(validate(parse_world("...\n...\n...")) == std::vector{Violation::NoExit});
  CHECK(validate(World(5, 5, PatchKind::Structure)) == std::vector{Violation::NoExit});
  CHECK(validate(set_patch(World(), {0, 0}, PatchKind::Exit)).empty());
}

TEST_CASE("validate: a 10x5 exit block is fine") {
  World w;
  for (int y = 26; y < 36; ++y) {
    for (int x = 56; x < 61; ++x) w.set({x, y}, PatchKind::Exit);
  }
  CHECK(w.count(PatchKind::Exit) == 50);
  CHECK(validate(w).empty());
}

TEST_CASE("serialize: 1x1 empty world") {
  CHECK(serialize_world(World(1, 1)) == ".");
  CHECK(World().size() == 3721);
}

TEST_CASE("serialize: fixture files round-trip byte for byte") {
  for (const auto& entry : std::filesystem::directory_iterator(EGRESS_PRESET_DIR)) {
    CAPTURE(entry.path().string());
    const auto text = slurp(entry.path());
    CHECK(serialize_world(parse_world(text)) == text);
  }
}

TEST_CASE("serialize: random worlds round-trip") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    World w(1 + static_cast<int>(rng.below(40)), 1 + static_cast<int>(rng.below(40)));
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Coord c{static_cast<int>(i % w.width()), static_cast<int>(i / w.width())};
      w.set(c, static_cast<PatchKind>(rng.below(5)));
    }
    REQUIRE(parse_world(serialize_world(w)) == w);
  }
}

TEST_CASE("set_patch") {
  const auto w = set_patch(World(), {5, 5}, PatchKind::Structure);
  CHECK(w.count(PatchKind::Structure) == 1);
  CHECK(w.at({5, 5}) == PatchKind::Structure);
  try {
    set_patch(World(), {99, 0}, PatchKind::Structure);
    FAIL("expected OutOfBounds");
  } catch (const WorldError& e) {
    CHECK(e.kind() == WorldError::Kind::OutOfBounds);
  }
}

TEST_CASE("patch_at rounds to the nearest centre") {
  CHECK(patch_at({60.2, 30.1}) == Coord{60, 30});
  CHECK(patch_at({0.49, 0.5}) == Coord{0, 1});
  CHECK(patch_at({3.0, 7.0}) == Coord{3, 7});
}

TEST_CASE("nearest_exit examples") {
  auto w = set_patch(World(), {60, 30}, PatchKind::Exit);
  auto hit = nearest_exit(w, {0, 30});
  CHECK(hit.exit == Coord{60, 30});
  CHECK(hit.distance == 60.0);

  hit = nearest_exit(w, {60, 30});
  CHECK(hit.distance == 0.0);

  // (10,20) and (30,20) are both 10 away from (20,20); (10,20) comes first in (y, x).
  World two;
  two.set({30, 20}, PatchKind::Exit);
  two.set({10, 20}, PatchKind::Exit);
  CHECK(nearest_exit(two, {20, 20}).exit == Coord{10, 20});
  // Lower y wins over lower x.
  World three;
  three.set({20, 30}, PatchKind::Exit);
  three.set({30, 20}, PatchKind::Exit);
  CHECK(nearest_exit(three, {25, 25}).exit == Coord{30, 20});
}

TEST_CASE("nearest_exit without exits throws NoExit") {
  try {
    nearest_exit(World(5, 5), {1, 1});
    FAIL("expected NoExit");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::NoExit);
  }
}

TEST_CASE("nearest_exit matches a linear scan") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    World w(61, 61);
    const auto exits = 1 + rng.below(80);
    for (std::uint64_t i = 0; i < exits; ++i) {
      w.set({static_cast<int>(rng.below(61)), static_cast<int>(rng.below(61))}, PatchKind::Exit);
    }
    const ExitIndex index(w);
    for (int q = 0; q < 20; ++q) {
      // Half the queries sit on patch centres, where ties are common.
      const Position p = q % 2 ? Position{rng.uniform(0, 60), rng.uniform(0, 60)}
                               : Position{static_cast<double>(rng.below(61)),
                                          static_cast<double>(rng.below(61))};
      const auto [coord, dist] = oracle::nearest_exit(w, p);
      const auto hit = index.nearest(p);
      REQUIRE(hit.exit == coord);
      REQUIRE(hit.distance == doctest::Approx(dist).epsilon(1e-12));
      // Distance is zero exactly when a patch centre query lands on an exit.
      if (p.x == std::floor(p.x) && p.y == std::floor(p.y)) {
        CHECK((hit.distance == 0.0) == (w.at(patch_at(p)) == PatchKind::Exit));
      }
    }
  }
}
