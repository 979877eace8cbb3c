#include "egress/world.hpp"

#include <cmath>
#include <string>

#include "egress/error.hpp"
#include "egress/kernels/kernels.hpp"

namespace egress {

char glyph(PatchKind kind) noexcept {
  switch (kind) {
    case PatchKind::Empty: return '.';
    case PatchKind::Structure: return '#';
    case PatchKind::Exit: return 'E';
    case PatchKind::AuthorityPost: return 'A';
    case PatchKind::Hazard: return 'H';
  }
  return '?';
}

std::optional<PatchKind> kind_from_glyph(char c) noexcept {
  switch (c) {
    case '.': return PatchKind::Empty;
    case '#': return PatchKind::Structure;
    case 'E': return PatchKind::Exit;
    case 'A': return PatchKind::AuthorityPost;
    case 'H': return PatchKind::Hazard;
    default: return std::nullopt;
  }
}

std::string_view kind_name(PatchKind kind) noexcept {
  switch (kind) {
    case PatchKind::Empty: return "empty";
    case PatchKind::Structure: return "structure";
    case PatchKind::Exit: return "exit";
    case PatchKind::AuthorityPost: return "authority_post";
    case PatchKind::Hazard: return "hazard";
  }
  return "unknown";
}

std::optional<PatchKind> kind_from_name(std::string_view name) noexcept {
  for (auto k : {PatchKind::Empty, PatchKind::Structure, PatchKind::Exit, PatchKind::AuthorityPost,
                 PatchKind::Hazard}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoExit: return "NoExit";
    case ErrorCode::NotEnoughEmptyPatches: return "NotEnoughEmptyPatches";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Coord patch_at(Position p) noexcept {
  return {static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
}

World::World(int width, int height, PatchKind fill) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw WorldError(WorldError::Kind::BadSize,
                     "world dimensions must be positive, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  patches_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

PatchKind World::at(Coord c) const {
  if (!in_bounds(c)) {
    throw WorldError(WorldError::Kind::OutOfBounds,
                     "patch (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                         ") is outside the world",
                     c);
  }
  return patches_[index(c)];
}

void World::set(Coord c, PatchKind kind) {
  if (!in_bounds(c)) {
    throw WorldError(WorldError::Kind::OutOfBounds,
                     "patch (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                         ") is outside the world",
                     c);
  }
  patches_[index(c)] = kind;
}

std::size_t World::count(PatchKind kind) const noexcept {
  std::size_t n = 0;
  for (auto k : patches_) n += (k == kind) ? 1 : 0;
  return n;
}

std::vector<Coord> World::patches_of(PatchKind kind) const {
  std::vector<Coord> out;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (patches_[index({x, y})] == kind) out.push_back({x, y});
    }
  }
  return out;
}

std::vector<Coord> World::exits() const { return patches_of(PatchKind::Exit); }

World parse_world(std::string_view text) {
  std::vector<std::string_view> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(line);
    start = end + 1;
  }
  if (rows.empty() || (rows.size() == 1 && rows.front().empty())) {
    throw WorldError(WorldError::Kind::EmptyWorld, "world file is empty");
  }

  const auto width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width || width == 0) {
      throw WorldError(WorldError::Kind::RaggedGrid,
                       "line " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                           " cells, expected " + std::to_string(width));
    }
  }

  const int w = static_cast<int>(width);
  const int h = static_cast<int>(rows.size());
  World world(w, h);
  for (int r = 0; r < h; ++r) {
    for (int x = 0; x < w; ++x) {
      const char c = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
      const Coord where{x, h - 1 - r};
      const auto kind = kind_from_glyph(c);
      if (!kind) {
        throw WorldError(WorldError::Kind::BadGlyph,
                         std::string("unknown glyph '") + c + "' at line " + std::to_string(r + 1) +
                             " column " + std::to_string(x + 1),
                         where);
      }
      world.set(where, *kind);
    }
  }
  return world;
}

std::string serialize_world(const World& world) {
  std::string out;
  out.reserve(world.size() + static_cast<std::size_t>(world.height()));
  for (int y = world.height() - 1; y >= 0; --y) {
    for (int x = 0; x < world.width(); ++x) out.push_back(glyph(world.at({x, y})));
    if (y > 0) out.push_back('\n');
  }
  return out;
}

World set_patch(World world, Coord coord, PatchKind kind) {
  world.set(coord, kind);
  return world;
}

std::string_view violation_name(Violation v) noexcept {
  switch (v) {
    case Violation::NoExit: return "NoExit";
    case Violation::TooSmall: return "TooSmall";
  }
  return "Unknown";
}

std::vector<Violation> validate(const World& world) {
  std::vector<Violation> out;
  if (world.width() < 3 || world.height() < 3) out.push_back(Violation::TooSmall);
  if (world.count(PatchKind::Exit) == 0) out.push_back(Violation::NoExit);
  return out;
}

ExitIndex::ExitIndex(const World& world) : coords_(world.exits()) {
  xs_.reserve(coords_.size());
  ys_.reserve(coords_.size());
  for (const auto& c : coords_) {
    xs_.push_back(c.x);
    ys_.push_back(c.y);
  }
}

ExitHit ExitIndex::nearest(Position p) const {
  if (coords_.empty()) throw SimError(ErrorCode::NoExit, "world has no exit patch");
  const auto hit = kernels::active().nearest_point(xs_.data(), ys_.data(), xs_.size(), p.x, p.y);
  return {coords_[hit.index], std::sqrt(hit.distance_sq)};
}

ExitHit nearest_exit(const World& world, Position p) { return ExitIndex(world).nearest(p); }

}  // namespace egress
