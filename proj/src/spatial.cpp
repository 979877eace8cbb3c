#include "egress/spatial.hpp"

#include <algorithm>
#include <cmath>

namespace egress {

namespace {
constexpr int kMaxCellsPerAxis = 1024;
}

int CellGrid::cell_of_x(double x) const noexcept {
  const int c = static_cast<int>(std::floor((x - min_x_) * inv_cell_));
  return std::clamp(c, 0, cols_ - 1);
}

int CellGrid::cell_of_y(double y) const noexcept {
  const int r = static_cast<int>(std::floor((y - min_y_) * inv_cell_));
  return std::clamp(r, 0, rows_ - 1);
}

void CellGrid::build(std::span<const double> xs, std::span<const double> ys, double cell_size) {
  const std::size_t n = xs.size();
  order_.resize(n);
  cell_ids_.resize(n);
  if (n == 0) {
    cols_ = rows_ = 1;
    cell_start_.assign(2, 0);
    return;
  }

  const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  min_x_ = *xmin;
  min_y_ = *ymin;
  const double span = std::max(*xmax - *xmin, *ymax - *ymin);
  // Slack keeps points within `cell_size` of each other at most one cell apart under rounding.
  double cell = std::max(cell_size, 1e-9) * (1.0 + 1e-6);
  if (span / cell > kMaxCellsPerAxis) cell = span / kMaxCellsPerAxis;
  inv_cell_ = 1.0 / cell;
  cols_ = static_cast<int>(std::floor((*xmax - min_x_) * inv_cell_)) + 1;
  rows_ = static_cast<int>(std::floor((*ymax - min_y_) * inv_cell_)) + 1;

  const auto cells = static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_);
  cell_start_.assign(cells + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = cell_of_y(ys[i]) * cols_ + cell_of_x(xs[i]);
    cell_ids_[i] = id;
    ++cell_start_[static_cast<std::size_t>(id) + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];

  // Stable counting sort: ties keep original index order.
  std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    order_[cursor[static_cast<std::size_t>(cell_ids_[i])]++] = static_cast<std::uint32_t>(i);
  }
}

std::size_t CellGrid::query_runs(double x, double y, std::array<IndexRun, 3>& runs) const noexcept {
  const int cx = cell_of_x(x);
  const int cy = cell_of_y(y);
  const int c0 = std::max(cx - 1, 0);
  const int c1 = std::min(cx + 1, cols_ - 1);
  std::size_t count = 0;
  for (int r = std::max(cy - 1, 0); r <= std::min(cy + 1, rows_ - 1); ++r) {
    const auto first = static_cast<std::size_t>(r * cols_ + c0);
    const auto last = static_cast<std::size_t>(r * cols_ + c1) + 1;
    const IndexRun run{cell_start_[first], cell_start_[last]};
    if (run.end > run.begin) runs[count++] = run;
  }
  return count;
}

}  // namespace egress
