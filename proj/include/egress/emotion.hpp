#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "egress/agents.hpp"
#include "egress/rng.hpp"
#include "egress/spatial.hpp"

namespace egress {

inline constexpr double kPanicThreshold = 15.0;  // mood <= this is Panicked
inline constexpr double kCalmThreshold = 69.0;   // mood >= this is Calm
inline constexpr double kDefaultContagionRadius = 2.0;

EmotionalState classify_state(double mood) noexcept;

/// Draws an integer mood in [0, 99] and sets the matching state.
void catastrophe_occurs(Citizen& citizen, Rng& rng);

/// Which states occur among the *other* citizens within the contagion radius.
struct NeighborhoodSummary {
  bool panicked_present = false;
  bool alerted_present = false;
  bool calm_present = false;

  friend bool operator==(const NeighborhoodSummary&, const NeighborhoodSummary&) = default;
};

struct ContagionDelta {
  double mood_delta = 0.0;
  std::uint32_t events = 0;

  friend bool operator==(const ContagionDelta&, const ContagionDelta&) = default;
};

/// Mood change and event count for one citizen. Every satisfied presence condition
/// counts one event, including the ones whose mood change is zero.
ContagionDelta contagion_delta(EmotionalState state, const NeighborhoodSummary& nbhd) noexcept;

/// Scratch buffers reused across contagion passes.
struct ContagionWorkspace {
  std::vector<std::uint32_t> members;  // indices of active citizens
  std::vector<double> xs, ys;          // unsorted, per member
  std::vector<double> sorted_xs, sorted_ys;
  std::vector<std::uint8_t> sorted_codes;
  CellGrid grid;
};

/// Neighborhood summaries of every active citizen, computed from the current states.
/// Failed citizens are neither subjects nor neighbours.
std::vector<NeighborhoodSummary> summarize_neighborhoods(std::span<const Citizen> citizens,
                                                         double radius,
                                                         ContagionWorkspace& ws);

/// One contagion pass. Presence flags come from a snapshot of the states at entry,
/// so the result does not depend on citizen order. Moods change; states do not.
/// Returns the number of contagion events.
std::uint64_t interact_all(std::span<Citizen> citizens, double radius, ContagionWorkspace& ws);
std::uint64_t interact_all(std::span<Citizen> citizens, double radius = kDefaultContagionRadius);

}  // namespace egress
