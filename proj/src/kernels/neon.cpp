#include "egress/kernels/kernels.hpp"

#if defined(__aarch64__)
#define EGRESS_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

namespace egress::kernels::detail {

#ifdef EGRESS_HAVE_NEON_KERNELS
namespace {

void count_in_radius_neon(const double* xs, const double* ys, const std::uint8_t* codes,
                          std::size_t n, double cx, double cy, double radius_sq,
                          CodeCounts& counts) {
  const float64x2_t vcx = vdupq_n_f64(cx);
  const float64x2_t vcy = vdupq_n_f64(cy);
  const float64x2_t vr2 = vdupq_n_f64(radius_sq);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vcx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vcy);
    // vmulq + vaddq rather than vfmaq to match the scalar rounding.
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    const uint64x2_t inside = vcleq_f64(d2, vr2);
    if (vgetq_lane_u64(inside, 0) != 0) ++counts[codes[i]];
    if (vgetq_lane_u64(inside, 1) != 0) ++counts[codes[i + 1]];
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double dxx = dx * dx;
    const double dyy = dy * dy;
    if (dxx + dyy <= radius_sq) ++counts[codes[i]];
  }
}

NearestResult nearest_point_neon(const double* xs, const double* ys, std::size_t n, double cx,
                                 double cy) {
  const float64x2_t vcx = vdupq_n_f64(cx);
  const float64x2_t vcy = vdupq_n_f64(cy);
  NearestResult best{0, __builtin_inf()};
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(xs + i), vcx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ys + i), vcy);
    const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
    const double d0 = vgetq_lane_f64(d2, 0);
    const double d1 = vgetq_lane_f64(d2, 1);
    if (d0 < best.distance_sq) best = {i, d0};
    if (d1 < best.distance_sq) best = {i + 1, d1};
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double dxx = dx * dx;
    const double dyy = dy * dy;
    const double d = dxx + dyy;
    if (d < best.distance_sq) best = {i, d};
  }
  return best;
}

constexpr KernelTable kNeon{"neon", &count_in_radius_neon, &nearest_point_neon};

}  // namespace

const KernelTable* neon_table() noexcept { return &kNeon; }

#else

const KernelTable* neon_table() noexcept { return nullptr; }

#endif

}  // namespace egress::kernels::detail
