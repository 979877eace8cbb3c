#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace egress {

enum class PatchKind : std::uint8_t { Empty, Structure, Exit, AuthorityPost, Hazard };

char glyph(PatchKind kind) noexcept;
std::optional<PatchKind> kind_from_glyph(char c) noexcept;
std::string_view kind_name(PatchKind kind) noexcept;
std::optional<PatchKind> kind_from_name(std::string_view name) noexcept;

/// Integer patch coordinate. x grows east, y grows north (y = 0 is the bottom row).
struct Coord {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

/// Continuous agent position in patch units; a patch is centred on its integer coordinate.
struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

Coord patch_at(Position p) noexcept;

/// Error raised for malformed world files and bad world edits.
class WorldError : public std::runtime_error {
 public:
  enum class Kind { EmptyWorld, RaggedGrid, BadGlyph, OutOfBounds, BadSize };

  WorldError(Kind kind, std::string message, std::optional<Coord> where = std::nullopt)
      : std::runtime_error(std::move(message)), kind_(kind), where_(where) {}

  Kind kind() const noexcept { return kind_; }
  const std::optional<Coord>& where() const noexcept { return where_; }

 private:
  Kind kind_;
  std::optional<Coord> where_;
};

class World {
 public:
  static constexpr int kDefaultSize = 61;

  World() : World(kDefaultSize, kDefaultSize) {}
  World(int width, int height, PatchKind fill = PatchKind::Empty);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return patches_.size(); }

  bool in_bounds(Coord c) const noexcept {
    return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
  }
  bool in_bounds(Position p) const noexcept {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_ - 1 && p.y <= height_ - 1;
  }

  PatchKind at(Coord c) const;
  void set(Coord c, PatchKind kind);

  /// Only Structure blocks movement; leaving the grid is handled by movement.
  bool is_blocked(Coord c) const { return at(c) == PatchKind::Structure; }

  std::size_t count(PatchKind kind) const noexcept;
  /// All Exit patches ordered by (y, x).
  std::vector<Coord> exits() const;
  std::vector<Coord> patches_of(PatchKind kind) const;

  friend bool operator==(const World&, const World&) = default;

 private:
  std::size_t index(Coord c) const noexcept {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  int width_;
  int height_;
  std::vector<PatchKind> patches_;  // row-major, row 0 is y = 0
};

/// Parse the `.world` text grid. The first line of the file is the top row
/// (y = height - 1). Accepts LF or CRLF line endings and an optional trailing newline.
World parse_world(std::string_view text);

/// Inverse of parse_world. Rows are joined with '\n' and no trailing newline is written.
std::string serialize_world(const World& world);

World set_patch(World world, Coord coord, PatchKind kind);

enum class Violation { NoExit, TooSmall };
std::string_view violation_name(Violation v) noexcept;

/// Empty result means the world is runnable.
std::vector<Violation> validate(const World& world);

struct ExitHit {
  Coord exit;
  double distance = 0.0;
};

/// Nearest Exit patch centre by Euclidean distance; ties go to the lowest (y, x).
/// Throws SimError(NoExit) when the world has no exit.
ExitHit nearest_exit(const World& world, Position p);

/// Exit centres in structure-of-arrays form for repeated nearest-exit queries.
class ExitIndex {
 public:
  ExitIndex() = default;
  explicit ExitIndex(const World& world);

  bool empty() const noexcept { return coords_.empty(); }
  std::size_t size() const noexcept { return coords_.size(); }
  const std::vector<Coord>& coords() const noexcept { return coords_; }

  ExitHit nearest(Position p) const;

 private:
  std::vector<Coord> coords_;  // sorted by (y, x)
  std::vector<double> xs_;
  std::vector<double> ys_;
};

}  // namespace egress
