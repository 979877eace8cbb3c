#include "egress/kernels/kernels.hpp"

namespace egress::kernels {
namespace {

void count_in_radius_scalar(const double* xs, const double* ys, const std::uint8_t* codes,
                            std::size_t n, double cx, double cy, double radius_sq,
                            CodeCounts& counts) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double dxx = dx * dx;
    const double dyy = dy * dy;
    if (dxx + dyy <= radius_sq) ++counts[codes[i]];
  }
}

NearestResult nearest_point_scalar(const double* xs, const double* ys, std::size_t n, double cx,
                                   double cy) {
  NearestResult best{0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double dxx = dx * dx;
    const double dyy = dy * dy;
    const double d = dxx + dyy;
    if (i == 0 || d < best.distance_sq) best = {i, d};
  }
  return best;
}

constexpr KernelTable kScalar{"scalar", &count_in_radius_scalar, &nearest_point_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace egress::kernels
