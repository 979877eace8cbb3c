#include "egress/movement.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "egress/kernels/kernels.hpp"

namespace egress {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Sub-step length used to detect walls thinner than one step.
constexpr double kProbeSpacing = 0.25;

struct SinCos {
  double sin;
  double cos;
};

// Quadrant reduction keeps the cardinal directions exact.
SinCos sincos_degrees(double degrees) noexcept {
  const double quadrant = std::nearbyint(degrees / 90.0);
  const double rest = (degrees - quadrant * 90.0) * kDegToRad;
  const double s = rest == 0.0 ? 0.0 : std::sin(rest);
  const double c = rest == 0.0 ? 1.0 : std::cos(rest);
  switch (static_cast<int>(std::fmod(quadrant, 4.0) + 4.0) % 4) {
    case 0: return {s, c};
    case 1: return {c, -s};
    case 2: return {-s, -c};
    default: return {-c, s};
  }
}

}  // namespace

double SpeedProfile::speed(EmotionalState s) const noexcept {
  switch (s) {
    case EmotionalState::Calm: return calm_speed;
    case EmotionalState::Alerted: return alerted_speed;
    case EmotionalState::Panicked: return panicked_speed;
  }
  return calm_speed;
}

double SpeedProfile::jitter(EmotionalState s) const noexcept {
  switch (s) {
    case EmotionalState::Calm: return calm_jitter;
    case EmotionalState::Alerted: return alerted_jitter;
    case EmotionalState::Panicked: return panicked_jitter;
  }
  return calm_jitter;
}

bool SpeedProfile::valid() const noexcept {
  const auto jitter_ok = [](double j) { return j >= 0.0 && j <= 180.0; };
  return calm_speed > 0.0 && alerted_speed > 0.0 && panicked_speed > 0.0 &&
         jitter_ok(calm_jitter) && jitter_ok(alerted_jitter) && jitter_ok(panicked_jitter);
}

double normalize_heading(double degrees) noexcept {
  double h = std::fmod(degrees, 360.0);
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  return h;
}

Position heading_vector(double degrees) noexcept {
  const auto sc = sincos_degrees(degrees);
  return {sc.sin, sc.cos};
}

double bearing(Position from, Position to) noexcept {
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  if (dx == 0.0 && dy == 0.0) return 0.0;
  if (dx == 0.0) return dy > 0.0 ? 0.0 : 180.0;
  if (dy == 0.0) return dx > 0.0 ? 90.0 : 270.0;
  return normalize_heading(std::atan2(dx, dy) / kDegToRad);
}

double propose_heading(const Citizen& citizen, const ExitIndex& exits, Rng& rng,
                       const SpeedProfile& profile) {
  const double j = profile.jitter(citizen.state);
  const double wobble = rng.uniform(-j, j);
  double base = citizen.heading;
  if (citizen.evacuation_directions && !exits.empty()) {
    const auto hit = exits.nearest(citizen.position);
    base = bearing(citizen.position,
                   {static_cast<double>(hit.exit.x), static_cast<double>(hit.exit.y)});
  }
  return normalize_heading(base + wobble);
}

double propose_heading(const Citizen& citizen, const World& world, Rng& rng,
                       const SpeedProfile& profile) {
  return propose_heading(citizen, ExitIndex(world), rng, profile);
}

bool step_clear(const World& world, Position from, Position to) noexcept {
  if (!world.in_bounds(to)) return false;
  const double dx = to.x - from.x;
  const double dy = to.y - from.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  const int probes = std::max(1, static_cast<int>(std::ceil(len / kProbeSpacing)));
  for (int k = 1; k <= probes; ++k) {
    const double t = static_cast<double>(k) / probes;
    const Position p{from.x + dx * t, from.y + dy * t};
    const Coord c = patch_at(p);
    if (!world.in_bounds(c) || world.is_blocked(c)) return false;
  }
  return true;
}

StepOutcome collision_check(const World& world, Position position, double heading, double speed,
                            Rng& rng) {
  const auto target = [&](double h) {
    const auto v = heading_vector(h);
    return Position{position.x + speed * v.x, position.y + speed * v.y};
  };

  if (const auto to = target(heading); step_clear(world, position, to)) {
    return {to, heading, TurnCheck::None};
  }

  const bool right_first = rng.coin();
  const double right = normalize_heading(heading + 90.0);
  const double left = normalize_heading(heading - 90.0);
  const double sides[2] = {right_first ? right : left, right_first ? left : right};
  const TurnCheck codes[2] = {right_first ? TurnCheck::TurnedRight : TurnCheck::TurnedLeft,
                              right_first ? TurnCheck::TurnedLeft : TurnCheck::TurnedRight};
  for (int i = 0; i < 2; ++i) {
    if (const auto to = target(sides[i]); step_clear(world, position, to)) {
      return {to, sides[i], codes[i]};
    }
  }

  const double back = normalize_heading(heading + 180.0);
  if (const auto to = target(back); step_clear(world, position, to)) {
    return {to, back, TurnCheck::Reversed};
  }
  return {position, heading, TurnCheck::Stuck};
}

std::size_t authority_guidance(std::span<Citizen> citizens, std::span<const Authority> authorities,
                               double radius) {
  if (authorities.empty()) return 0;
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(authorities.size());
  ys.reserve(authorities.size());
  for (const auto& a : authorities) {
    xs.push_back(a.position.x);
    ys.push_back(a.position.y);
  }
  const std::vector<std::uint8_t> codes(authorities.size(), 0);
  const auto& kernel = kernels::active();
  const double radius_sq = radius * radius;

  std::size_t granted = 0;
  for (auto& c : citizens) {
    if (c.status != CitizenStatus::Active || c.evacuation_directions) continue;
    kernels::CodeCounts counts{};
    kernel.count_in_radius(xs.data(), ys.data(), codes.data(), xs.size(), c.position.x,
                           c.position.y, radius_sq, counts);
    if (counts[0] > 0) {
      c.evacuation_directions = true;
      ++granted;
    }
  }
  return granted;
}

ExitStatus exit_check(const Citizen& citizen, const World& world) {
  const Coord c = patch_at(citizen.position);
  return world.in_bounds(c) && world.at(c) == PatchKind::Exit ? ExitStatus::Escaped
                                                              : ExitStatus::Active;
}

void move_citizen(Citizen& citizen, const World& world, const ExitIndex& exits, Rng& rng,
                  const SpeedProfile& profile) {
  citizen.speed = profile.speed(citizen.state);
  const double heading = propose_heading(citizen, exits, rng, profile);
  const auto out = collision_check(world, citizen.position, heading, citizen.speed, rng);
  citizen.position = out.position;
  citizen.heading = out.heading;
  citizen.turn_check = out.turn_check;
}

void move_authority(Authority& authority, const World& world, Rng& rng,
                    const AuthorityMotion& motion) {
  if (authority.stationary) return;
  const double heading =
      normalize_heading(authority.heading + rng.uniform(-motion.jitter, motion.jitter));
  const auto out = collision_check(world, authority.position, heading, motion.speed, rng);
  authority.position = out.position;
  authority.heading = out.heading;
  authority.turn_check = out.turn_check;
}

}  // namespace egress
