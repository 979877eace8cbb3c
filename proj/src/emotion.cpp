#include "egress/emotion.hpp"

#include "egress/kernels/kernels.hpp"

namespace egress {

std::string_view state_name(EmotionalState s) noexcept {
  switch (s) {
    case EmotionalState::Calm: return "calm";
    case EmotionalState::Alerted: return "alerted";
    case EmotionalState::Panicked: return "panicked";
  }
  return "unknown";
}

std::string_view state_color(EmotionalState s) noexcept {
  switch (s) {
    case EmotionalState::Calm: return "green";
    case EmotionalState::Alerted: return "yellow";
    case EmotionalState::Panicked: return "red";
  }
  return "unknown";
}

EmotionalState classify_state(double mood) noexcept {
  // Panicked wins over Alerted at and below the lower threshold.
  if (mood <= kPanicThreshold) return EmotionalState::Panicked;
  if (mood >= kCalmThreshold) return EmotionalState::Calm;
  return EmotionalState::Alerted;
}

void catastrophe_occurs(Citizen& citizen, Rng& rng) {
  citizen.mood = static_cast<double>(rng.below(100));
  citizen.state = classify_state(citizen.mood);
}

ContagionDelta contagion_delta(EmotionalState state, const NeighborhoodSummary& nbhd) noexcept {
  ContagionDelta d;
  const auto apply = [&](bool condition, double delta) {
    if (!condition) return;
    d.mood_delta += delta;
    ++d.events;
  };
  switch (state) {
    case EmotionalState::Alerted:
      apply(nbhd.panicked_present, -1.0);
      apply(nbhd.calm_present, +1.0);
      apply(nbhd.alerted_present, 0.0);
      break;
    case EmotionalState::Calm:
      apply(nbhd.alerted_present, -1.5);
      apply(nbhd.panicked_present, -4.0);
      apply(nbhd.calm_present, +0.5);
      break;
    case EmotionalState::Panicked:
      apply(nbhd.panicked_present, -2.0);
      apply(nbhd.alerted_present, 0.0);
      apply(nbhd.calm_present, 0.0);
      break;
  }
  return d;
}

std::vector<NeighborhoodSummary> summarize_neighborhoods(std::span<const Citizen> citizens,
                                                         double radius,
                                                         ContagionWorkspace& ws) {
  ws.members.clear();
  ws.xs.clear();
  ws.ys.clear();
  for (std::size_t i = 0; i < citizens.size(); ++i) {
    if (citizens[i].status != CitizenStatus::Active) continue;
    ws.members.push_back(static_cast<std::uint32_t>(i));
    ws.xs.push_back(citizens[i].position.x);
    ws.ys.push_back(citizens[i].position.y);
  }

  std::vector<NeighborhoodSummary> out(citizens.size());
  const std::size_t n = ws.members.size();
  if (n == 0) return out;

  ws.grid.build(ws.xs, ws.ys, radius);
  const auto& order = ws.grid.order();
  ws.sorted_xs.resize(n);
  ws.sorted_ys.resize(n);
  ws.sorted_codes.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto m = order[k];
    ws.sorted_xs[k] = ws.xs[m];
    ws.sorted_ys[k] = ws.ys[m];
    ws.sorted_codes[k] = static_cast<std::uint8_t>(citizens[ws.members[m]].state);
  }

  const auto& kernel = kernels::active();
  const double radius_sq = radius * radius;
  std::array<IndexRun, 3> runs{};
  for (std::size_t m = 0; m < n; ++m) {
    const double x = ws.xs[m];
    const double y = ws.ys[m];
    kernels::CodeCounts counts{};
    const auto nruns = ws.grid.query_runs(x, y, runs);
    for (std::size_t r = 0; r < nruns; ++r) {
      kernel.count_in_radius(ws.sorted_xs.data() + runs[r].begin,
                             ws.sorted_ys.data() + runs[r].begin,
                             ws.sorted_codes.data() + runs[r].begin, runs[r].end - runs[r].begin,
                             x, y, radius_sq, counts);
    }
    // The subject always counts itself (distance 0); presence is about others.
    const auto& self = citizens[ws.members[m]];
    --counts[static_cast<std::size_t>(self.state)];
    out[ws.members[m]] = {
        counts[static_cast<std::size_t>(EmotionalState::Panicked)] > 0,
        counts[static_cast<std::size_t>(EmotionalState::Alerted)] > 0,
        counts[static_cast<std::size_t>(EmotionalState::Calm)] > 0,
    };
  }
  return out;
}

std::uint64_t interact_all(std::span<Citizen> citizens, double radius, ContagionWorkspace& ws) {
  const auto summaries = summarize_neighborhoods(citizens, radius, ws);
  std::uint64_t events = 0;
  for (std::size_t i = 0; i < citizens.size(); ++i) {
    auto& c = citizens[i];
    if (c.status != CitizenStatus::Active) continue;
    const auto d = contagion_delta(c.state, summaries[i]);
    c.mood += d.mood_delta;
    events += d.events;
  }
  return events;
}

std::uint64_t interact_all(std::span<Citizen> citizens, double radius) {
  ContagionWorkspace ws;
  return interact_all(citizens, radius, ws);
}

}  // namespace egress
