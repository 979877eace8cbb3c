#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace egress {

/// Contiguous index range [begin, end) into the grid's sorted order.
struct IndexRun {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
};

/// Uniform bucket grid for fixed-radius neighbour queries. Points are counting-sorted
/// by cell in row-major order, so the three cells of one row of a 3x3 query block are
/// one contiguous run. With cell size >= radius, the 3x3 block around a point's cell
/// contains every point within the radius.
class CellGrid {
 public:
  void build(std::span<const double> xs, std::span<const double> ys, double cell_size);

  /// sorted position -> original point index
  const std::vector<std::uint32_t>& order() const noexcept { return order_; }

  /// Up to three runs covering the 3x3 cell block around (x, y). Returns the run count.
  std::size_t query_runs(double x, double y, std::array<IndexRun, 3>& runs) const noexcept;

 private:
  int cell_of_x(double x) const noexcept;
  int cell_of_y(double y) const noexcept;

  double min_x_ = 0.0;
  double min_y_ = 0.0;
  double inv_cell_ = 1.0;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint32_t> cell_start_;  // rows_ * cols_ + 1 prefix offsets
  std::vector<std::uint32_t> order_;
  std::vector<int> cell_ids_;
};

}  // namespace egress
