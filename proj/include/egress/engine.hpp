#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "egress/agents.hpp"
#include "egress/emotion.hpp"
#include "egress/movement.hpp"
#include "egress/rng.hpp"
#include "egress/world.hpp"

namespace egress {

struct SimConfig {
  World world;
  std::uint32_t initial_population = 15;
  std::uint32_t initial_authorities = 0;
  bool spawn_exit_authority = true;
  std::uint32_t deadline = 1000;  // ticks; one tick is one reported second
  double contagion_radius = kDefaultContagionRadius;
  double guidance_radius = 2.0;
  SpeedProfile speed_profile;
  bool authorities_wander = false;
  AuthorityMotion authority_motion;
  std::uint64_t seed = 0;
  std::uint32_t hazards = 0;  // inert debug paint
};

/// Throws SimError(InvalidConfig | NoExit) when the config cannot be run.
void check_config(const SimConfig& config);

struct StatePercentages {
  double panicked = 0.0;
  double alerted = 0.0;
  double calm = 0.0;

  friend bool operator==(const StatePercentages&, const StatePercentages&) = default;
};

struct RunStats {
  std::uint32_t total_citizens = 0;  // currently active
  std::uint32_t successful_escapes = 0;
  std::uint32_t failed_evacuations = 0;
  std::uint64_t total_contagions = 0;
  StatePercentages percentages;
  std::uint32_t duration = 0;
  std::vector<StatePercentages> history;  // one entry per completed tick

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

enum class Phase { Running, Paused, Ended };

struct PatchEdit {
  std::uint64_t revision = 0;
  Coord coord;
  PatchKind kind = PatchKind::Empty;

  friend bool operator==(const PatchEdit&, const PatchEdit&) = default;
};

struct SimState {
  SimConfig config;  // config.world is the live world, including edits and hazards
  ExitIndex exits;
  std::uint32_t tick = 0;
  std::vector<Citizen> citizens;  // active, then failed ones at the end of a run
  std::vector<Authority> authorities;
  RunStats stats;
  Rng rng;
  Phase phase = Phase::Running;
  std::vector<PatchEdit> edits;
  std::uint64_t revision = 0;
  ContagionWorkspace workspace;
  std::vector<std::uint32_t> move_order;

  std::size_t active_count() const noexcept;
};

/// Spawns agents and draws moods. RNG draw order: citizen patches, authority patches,
/// exit authority patch, hazard patches, then one mood per citizen in id order.
SimState setup(const SimConfig& config);

/// One tick: guidance, contagion, reclassification, movement in a shuffled order,
/// exit removal, deadline, statistics. No-op unless phase is Running.
void tick(SimState& state);

RunStats run_to_completion(const SimConfig& config);

/// Edit the live world between ticks. Keeps the exit index and the edit log current.
void apply_patch_edit(SimState& state, Coord coord, PatchKind kind);

struct AgentView {
  AgentId id = 0;
  bool authority = false;
  double x = 0.0;
  double y = 0.0;
  EmotionalState state = EmotionalState::Calm;
  bool guided = false;
  bool failed = false;
  std::string_view color() const noexcept;

  friend bool operator==(const AgentView&, const AgentView&) = default;
};

struct Snapshot {
  std::uint32_t tick = 0;
  Phase phase = Phase::Running;
  std::vector<AgentView> agents;
  RunStats stats;
  std::vector<PatchEdit> changed_patches;
  std::uint64_t revision = 0;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

/// Value copy of the visible state. `since_revision` limits changed_patches to later edits.
Snapshot snapshot(const SimState& state, std::uint64_t since_revision = 0);

StatePercentages state_percentages(std::span<const Citizen> citizens) noexcept;

}  // namespace egress
