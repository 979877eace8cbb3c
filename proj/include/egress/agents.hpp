#pragma once

#include <cstdint>
#include <string_view>

#include "egress/world.hpp"

namespace egress {

enum class EmotionalState : std::uint8_t { Calm = 0, Alerted = 1, Panicked = 2 };

std::string_view state_name(EmotionalState s) noexcept;
/// Display colour class: Calm green, Alerted yellow, Panicked red.
std::string_view state_color(EmotionalState s) noexcept;

/// Debug record of the last obstacle decision.
enum class TurnCheck : std::uint8_t { None = 0, TurnedRight = 1, TurnedLeft = 2, Reversed = 3, Stuck = 4 };

enum class CitizenStatus : std::uint8_t { Active, Failed };

using AgentId = std::uint32_t;

struct Citizen {
  AgentId id = 0;
  Position position;
  double heading = 0.0;  // degrees clockwise from north, [0, 360)
  double mood = 0.0;
  EmotionalState state = EmotionalState::Alerted;
  bool evacuation_directions = false;
  TurnCheck turn_check = TurnCheck::None;
  double speed = 0.0;
  CitizenStatus status = CitizenStatus::Active;

  friend bool operator==(const Citizen&, const Citizen&) = default;
};

struct Authority {
  AgentId id = 0;
  Position position;
  double heading = 0.0;
  bool stationary = true;
  TurnCheck turn_check = TurnCheck::None;

  friend bool operator==(const Authority&, const Authority&) = default;
};

}  // namespace egress
