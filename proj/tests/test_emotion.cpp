#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "egress/emotion.hpp"
#include "oracles.hpp"

using namespace egress;

TEST_CASE("classify_state thresholds") {
  CHECK(classify_state(70) == EmotionalState::Calm);
  CHECK(classify_state(69) == EmotionalState::Calm);
  CHECK(classify_state(68.999) == EmotionalState::Alerted);
  CHECK(classify_state(68) == EmotionalState::Alerted);
  CHECK(classify_state(16) == EmotionalState::Alerted);
  CHECK(classify_state(15.0001) == EmotionalState::Alerted);
  CHECK(classify_state(15) == EmotionalState::Panicked);
  CHECK(classify_state(-3.5) == EmotionalState::Panicked);
  CHECK(classify_state(1e9) == EmotionalState::Calm);
  CHECK(classify_state(-1e9) == EmotionalState::Panicked);
}

TEST_CASE("catastrophe_occurs sets mood and matching state") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    Citizen c;
    catastrophe_occurs(c, rng);
    REQUIRE(c.mood >= 0);
    REQUIRE(c.mood <= 99);
    REQUIRE(c.mood == std::floor(c.mood));
    REQUIRE(c.state == classify_state(c.mood));
  }
}

TEST_CASE("initial state enumeration: 16 panicked, 53 alerted, 31 calm") {
  const auto counts = oracle::enumerate_initial_states();
  CHECK(counts[2] == 16);
  CHECK(counts[1] == 53);
  CHECK(counts[0] == 31);
  // The library classifier agrees with the enumeration on every draw.
  std::array<int, 3> lib{};
  for (int mood = 0; mood <= 99; ++mood) ++lib[static_cast<int>(classify_state(mood))];
  CHECK(lib == counts);
}

TEST_CASE("contagion_delta table") {
  using S = EmotionalState;
  CHECK(contagion_delta(S::Alerted, {true, false, true}) == ContagionDelta{0.0, 2});
  CHECK(contagion_delta(S::Calm, {true, false, false}) == ContagionDelta{-4.0, 1});
  CHECK(contagion_delta(S::Panicked, {false, false, true}) == ContagionDelta{0.0, 1});
  CHECK(contagion_delta(S::Calm, {false, true, false}) == ContagionDelta{-1.5, 1});
  CHECK(contagion_delta(S::Calm, {false, false, true}) == ContagionDelta{0.5, 1});
  CHECK(contagion_delta(S::Panicked, {true, true, true}) == ContagionDelta{-2.0, 3});
  CHECK(contagion_delta(S::Alerted, {false, true, false}) == ContagionDelta{0.0, 1});
  for (const auto s : {S::Calm, S::Alerted, S::Panicked}) {
    CHECK(contagion_delta(s, {}) == ContagionDelta{0.0, 0});
  }
}

TEST_CASE("two calm citizens one patch apart") {
  std::vector<Citizen> cs(2);
  cs[0].position = {10, 10};
  cs[1].position = {11, 10};
  for (auto& c : cs) {
    c.mood = 80;
    c.state = EmotionalState::Calm;
  }
  CHECK(interact_all(cs) == 2);
  CHECK(cs[0].mood == 80.5);
  CHECK(cs[1].mood == 80.5);
}

TEST_CASE("radius is inclusive at 2 and excludes sqrt(5)") {
  std::vector<Citizen> cs(2);
  cs[0].position = {10, 10};
  cs[1].position = {12, 10};
  CHECK(interact_all(cs) == 2);
  cs[1].position = {12, 11};
  CHECK(interact_all(cs) == 0);
}

TEST_CASE("interact_all does not reclassify") {
  std::vector<Citizen> cs(2);
  cs[0].position = {5, 5};
  cs[1].position = {5, 6};
  cs[0].mood = 70;
  cs[0].state = EmotionalState::Calm;
  cs[1].mood = 5;
  cs[1].state = EmotionalState::Panicked;
  interact_all(cs);
  CHECK(cs[0].mood == 66);
  CHECK(cs[0].state == EmotionalState::Calm);
}

TEST_CASE("failed citizens neither feel nor spread contagion") {
  std::vector<Citizen> cs(2);
  cs[0].position = {5, 5};
  cs[1].position = {5, 6};
  cs[1].status = CitizenStatus::Failed;
  cs[1].state = EmotionalState::Panicked;
  CHECK(interact_all(cs) == 0);
}

TEST_CASE("interact_all matches the all-pairs oracle") {
  Rng rng(2024);
  ContagionWorkspace ws;
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::size_t>(rng.below(120));
    // Alternate dense integer layouts (many exact-radius pairs) and sparse real ones.
    const int side = trial % 2 ? 61 : 8;
    auto cs = oracle::random_citizens(rng, n, side, side, trial % 2 == 0);
    const auto expected = oracle::contagion(cs, 2.0);
    const auto events = interact_all(cs, 2.0, ws);
    REQUIRE(events == expected.events);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(cs[i].mood == expected.moods[i]);
    CHECK(events <= 3 * n);
  }
}

TEST_CASE("interact_all is order independent") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto cs = oracle::random_citizens(rng, rng.below(60), 12, 12, trial % 3 == 0);
    auto shuffled = cs;
    std::vector<std::size_t> perm(cs.size());
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span(perm));
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled[i] = cs[perm[i]];

    const auto a = interact_all(cs);
    const auto b = interact_all(shuffled);
    REQUIRE(a == b);
    for (std::size_t i = 0; i < perm.size(); ++i) REQUIRE(shuffled[i].mood == cs[perm[i]].mood);
  }
}

TEST_CASE("non-default radii agree with the oracle") {
  Rng rng(8);
  for (const double r : {0.0, 0.5, 1.0, 3.0, 7.5}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto cs = oracle::random_citizens(rng, rng.below(80), 20, 20, trial % 2 == 0);
      const auto expected = oracle::contagion(cs, r);
      REQUIRE(interact_all(cs, r) == expected.events);
      for (std::size_t i = 0; i < cs.size(); ++i) REQUIRE(cs[i].mood == expected.moods[i]);
    }
  }
}
