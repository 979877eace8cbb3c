#include "egress/engine.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "egress/error.hpp"

namespace egress {

void check_config(const SimConfig& config) {
  for (const auto v : validate(config.world)) {
    if (v == Violation::NoExit) {
      throw SimError(ErrorCode::NoExit, "world has no exit patch; draw at least one exit");
    }
    throw SimError(ErrorCode::InvalidConfig,
                   "world is not runnable: " + std::string(violation_name(v)));
  }
  if (config.deadline < 1) throw SimError(ErrorCode::InvalidConfig, "deadline must be >= 1");
  if (!config.speed_profile.valid()) {
    throw SimError(ErrorCode::InvalidConfig,
                   "speed profile needs positive speeds and jitters within [0, 180]");
  }
  if (!(config.contagion_radius >= 0.0) || !(config.guidance_radius >= 0.0)) {
    throw SimError(ErrorCode::InvalidConfig, "radii must be non-negative");
  }
  if (config.authorities_wander &&
      !(config.authority_motion.speed > 0.0 && config.authority_motion.jitter >= 0.0 &&
        config.authority_motion.jitter <= 180.0)) {
    throw SimError(ErrorCode::InvalidConfig, "authority motion needs a positive speed");
  }
}

std::size_t SimState::active_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(citizens.begin(), citizens.end(), [](const auto& c) {
    return c.status == CitizenStatus::Active;
  }));
}

StatePercentages state_percentages(std::span<const Citizen> citizens) noexcept {
  std::size_t counts[3] = {0, 0, 0};
  std::size_t active = 0;
  for (const auto& c : citizens) {
    if (c.status != CitizenStatus::Active) continue;
    ++counts[static_cast<std::size_t>(c.state)];
    ++active;
  }
  if (active == 0) return {};
  const double scale = 100.0 / static_cast<double>(active);
  return {
      static_cast<double>(counts[static_cast<std::size_t>(EmotionalState::Panicked)]) * scale,
      static_cast<double>(counts[static_cast<std::size_t>(EmotionalState::Alerted)]) * scale,
      static_cast<double>(counts[static_cast<std::size_t>(EmotionalState::Calm)]) * scale,
  };
}

namespace {

Position centre(Coord c) { return {static_cast<double>(c.x), static_cast<double>(c.y)}; }

void refresh_stats(SimState& s) {
  s.stats.total_citizens = static_cast<std::uint32_t>(s.active_count());
  s.stats.percentages = state_percentages(s.citizens);
}

void record_edit(SimState& s, Coord coord, PatchKind kind) {
  s.config.world.set(coord, kind);
  ++s.revision;
  s.edits.push_back({s.revision, coord, kind});
}

}  // namespace

SimState setup(const SimConfig& config) {
  check_config(config);

  SimState s;
  s.config = config;
  s.rng = Rng(config.seed);

  const auto empty = config.world.patches_of(PatchKind::Empty);
  const std::size_t pop = config.initial_population;
  const std::size_t auth = config.initial_authorities;
  if (pop + auth > empty.size()) {
    throw SimError(ErrorCode::NotEnoughEmptyPatches,
                   std::to_string(pop + auth) + " agents need distinct empty patches but only " +
                       std::to_string(empty.size()) + " exist");
  }

  auto picks = s.rng.sample_indices(empty.size(), pop + auth);
  AgentId next_id = 0;
  s.citizens.reserve(pop);
  for (std::size_t i = 0; i < pop; ++i) {
    Citizen c;
    c.id = next_id++;
    c.position = centre(empty[picks[i]]);
    s.citizens.push_back(c);
  }
  for (std::size_t i = pop; i < pop + auth; ++i) {
    Authority a;
    a.id = next_id++;
    a.position = centre(empty[picks[i]]);
    a.stationary = !config.authorities_wander;
    s.authorities.push_back(a);
  }
  if (config.spawn_exit_authority) {
    const auto exits = config.world.exits();
    Authority a;
    a.id = next_id++;
    a.position = centre(exits[s.rng.below(exits.size())]);
    a.stationary = !config.authorities_wander;
    s.authorities.push_back(a);
  }

  if (config.hazards > 0) {
    std::sort(picks.begin(), picks.end());
    std::vector<Coord> free;
    free.reserve(empty.size() - picks.size());
    for (std::size_t i = 0, p = 0; i < empty.size(); ++i) {
      if (p < picks.size() && picks[p] == i) {
        ++p;
        continue;
      }
      free.push_back(empty[i]);
    }
    if (config.hazards > free.size()) {
      throw SimError(ErrorCode::NotEnoughEmptyPatches,
                     "not enough free empty patches for " + std::to_string(config.hazards) +
                         " hazards");
    }
    for (auto i : s.rng.sample_indices(free.size(), config.hazards)) {
      record_edit(s, free[i], PatchKind::Hazard);
    }
  }

  for (auto& c : s.citizens) {
    c.heading = static_cast<double>(s.rng.below(360));
    catastrophe_occurs(c, s.rng);
    c.speed = config.speed_profile.speed(c.state);
  }
  for (auto& a : s.authorities) a.heading = static_cast<double>(s.rng.below(360));

  s.exits = ExitIndex(s.config.world);
  refresh_stats(s);
  if (pop == 0) s.phase = Phase::Ended;
  return s;
}

void tick(SimState& s) {
  if (s.phase != Phase::Running) return;
  const auto& cfg = s.config;

  authority_guidance(s.citizens, s.authorities, cfg.guidance_radius);

  s.stats.total_contagions += interact_all(s.citizens, cfg.contagion_radius, s.workspace);

  for (auto& c : s.citizens) c.state = classify_state(c.mood);

  s.move_order.resize(s.citizens.size());
  std::iota(s.move_order.begin(), s.move_order.end(), 0u);
  s.rng.shuffle(std::span<std::uint32_t>(s.move_order));
  for (const auto i : s.move_order) {
    move_citizen(s.citizens[i], cfg.world, s.exits, s.rng, cfg.speed_profile);
  }
  if (cfg.authorities_wander) {
    for (auto& a : s.authorities) move_authority(a, cfg.world, s.rng, cfg.authority_motion);
  }

  const auto before = s.citizens.size();
  std::erase_if(s.citizens, [&](const Citizen& c) {
    return exit_check(c, cfg.world) == ExitStatus::Escaped;
  });
  s.stats.successful_escapes += static_cast<std::uint32_t>(before - s.citizens.size());

  const std::uint32_t next = s.tick + 1;
  if (s.citizens.empty()) {
    s.phase = Phase::Ended;
    s.stats.duration = next;
  } else if (next >= cfg.deadline) {
    for (auto& c : s.citizens) c.status = CitizenStatus::Failed;
    s.stats.failed_evacuations += static_cast<std::uint32_t>(s.citizens.size());
    s.phase = Phase::Ended;
    s.stats.duration = next;
  }

  refresh_stats(s);
  s.stats.history.push_back(s.stats.percentages);
  s.tick = next;
}

RunStats run_to_completion(const SimConfig& config) {
  auto s = setup(config);
  while (s.phase == Phase::Running) tick(s);
  return s.stats;
}

void apply_patch_edit(SimState& s, Coord coord, PatchKind kind) {
  record_edit(s, coord, kind);
  s.exits = ExitIndex(s.config.world);
}

std::string_view AgentView::color() const noexcept {
  return authority ? std::string_view{"orange"} : state_color(state);
}

Snapshot snapshot(const SimState& s, std::uint64_t since_revision) {
  Snapshot snap;
  snap.tick = s.tick;
  snap.phase = s.phase;
  snap.stats = s.stats;
  snap.revision = s.revision;
  snap.agents.reserve(s.citizens.size() + s.authorities.size());
  for (const auto& c : s.citizens) {
    snap.agents.push_back({c.id, false, c.position.x, c.position.y, c.state,
                           c.evacuation_directions, c.status == CitizenStatus::Failed});
  }
  for (const auto& a : s.authorities) {
    snap.agents.push_back({a.id, true, a.position.x, a.position.y, EmotionalState::Calm, false,
                           false});
  }
  for (const auto& e : s.edits) {
    if (e.revision > since_revision) snap.changed_patches.push_back(e);
  }
  return snap;
}

}  // namespace egress
