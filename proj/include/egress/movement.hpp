#pragma once

#include <span>

#include "egress/agents.hpp"
#include "egress/rng.hpp"
#include "egress/world.hpp"

namespace egress {

/// Per-state speed (patches/tick) and maximum heading wobble (degrees, +/-).
struct SpeedProfile {
  double calm_speed = 1.0;
  double alerted_speed = 1.2;
  double panicked_speed = 1.5;
  double calm_jitter = 10.0;
  double alerted_jitter = 30.0;
  double panicked_jitter = 60.0;

  double speed(EmotionalState s) const noexcept;
  double jitter(EmotionalState s) const noexcept;
  bool valid() const noexcept;

  friend bool operator==(const SpeedProfile&, const SpeedProfile&) = default;
};

/// Optional slow wander for authorities.
struct AuthorityMotion {
  double speed = 0.5;
  double jitter = 20.0;
};

/// Normalises to [0, 360).
double normalize_heading(double degrees) noexcept;

/// Unit step for a heading measured clockwise from north: (sin h, cos h).
Position heading_vector(double degrees) noexcept;

/// Heading from `from` towards `to`.
double bearing(Position from, Position to) noexcept;

/// Guided citizens aim at the nearest exit; others keep their heading. Either way a
/// uniform wobble in [-jitter, +jitter] is added (one draw, even when jitter is 0).
double propose_heading(const Citizen& citizen, const ExitIndex& exits, Rng& rng,
                       const SpeedProfile& profile);
double propose_heading(const Citizen& citizen, const World& world, Rng& rng,
                       const SpeedProfile& profile);

/// True when moving from `from` to `to` stays in bounds and never crosses a Structure patch.
bool step_clear(const World& world, Position from, Position to) noexcept;

struct StepOutcome {
  Position position;
  double heading = 0.0;
  TurnCheck turn_check = TurnCheck::None;
};

/// Tries the proposed heading, then a 90 degree turn to a randomly chosen side, then the
/// other side, then a reversal. If all four are blocked the agent stays put (Stuck).
/// The side is drawn only when the forward step is blocked.
StepOutcome collision_check(const World& world, Position position, double heading, double speed,
                            Rng& rng);

/// Grants evacuation directions to every active citizen within `radius` of an authority.
/// Returns the number of newly guided citizens.
std::size_t authority_guidance(std::span<Citizen> citizens, std::span<const Authority> authorities,
                               double radius);

enum class ExitStatus { Active, Escaped };

ExitStatus exit_check(const Citizen& citizen, const World& world);

/// Full movement step for one citizen: speed from state, heading, obstacle handling.
void move_citizen(Citizen& citizen, const World& world, const ExitIndex& exits, Rng& rng,
                  const SpeedProfile& profile);

void move_authority(Authority& authority, const World& world, Rng& rng,
                    const AuthorityMotion& motion);

}  // namespace egress
