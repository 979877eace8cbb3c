#include "egress/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define EGRESS_HAVE_AVX2_KERNELS 1
#include <immintrin.h>

#include <cstring>
#endif

namespace egress::kernels::detail {

#ifdef EGRESS_HAVE_AVX2_KERNELS
namespace {

#define EGRESS_AVX2 __attribute__((target("avx2")))

EGRESS_AVX2 inline std::uint32_t tally(__m256i inside, __m256i lane_codes, __m256i code) {
  const __m256i hit = _mm256_and_si256(inside, _mm256_cmpeq_epi64(lane_codes, code));
  return static_cast<std::uint32_t>(
      __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(hit)))));
}

EGRESS_AVX2 void count_in_radius_avx2(const double* xs, const double* ys,
                                      const std::uint8_t* codes, std::size_t n, double cx,
                                      double cy, double radius_sq, CodeCounts& counts) {
  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  const __m256d vr2 = _mm256_set1_pd(radius_sq);
  const __m256i code0 = _mm256_set1_epi64x(0);
  const __m256i code1 = _mm256_set1_epi64x(1);
  const __m256i code2 = _mm256_set1_epi64x(2);
  const __m256i code3 = _mm256_set1_epi64x(3);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
    // Separate mul/add keeps rounding identical to the scalar reference.
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    const __m256i inside = _mm256_castpd_si256(_mm256_cmp_pd(d2, vr2, _CMP_LE_OQ));

    std::int32_t packed = 0;
    std::memcpy(&packed, codes + i, sizeof(packed));
    const __m256i lane_codes = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
    counts[0] += tally(inside, lane_codes, code0);
    counts[1] += tally(inside, lane_codes, code1);
    counts[2] += tally(inside, lane_codes, code2);
    counts[3] += tally(inside, lane_codes, code3);
  }
  for (; i < n; ++i) {
    const double dx = xs[i] - cx;
    const double dy = ys[i] - cy;
    const double dxx = dx * dx;
    const double dyy = dy * dy;
    if (dxx + dyy <= radius_sq) ++counts[codes[i]];
  }
}

EGRESS_AVX2 NearestResult nearest_point_avx2(const double* xs, const double* ys, std::size_t n,
                                             double cx, double cy) {
  if (n < 8) return scalar_table().nearest_point(xs, ys, n, cx, cy);

  const __m256d vcx = _mm256_set1_pd(cx);
  const __m256d vcy = _mm256_set1_pd(cy);
  __m256d best_d = _mm256_set1_pd(__builtin_inf());
  __m256d best_i = _mm256_set1_pd(-1.0);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    // Strict less-than keeps the earliest index within each lane.
    const __m256d better = _mm256_cmp_pd(d2, best_d, _CMP_LT_OQ);
    best_d = _mm256_blendv_pd(best_d, d2, better);
    best_i = _mm256_blendv_pd(best_i, idx, better);
    idx = _mm256_add_pd(idx, step);
  }

  alignas(32) double lane_d[4];
  alignas(32) double lane_i[4];
  _mm256_store_pd(lane_d, best_d);
  _mm256_store_pd(lane_i, best_i);

  NearestResult best{static_cast<std::size_t>(lane_i[0]), lane_d[0]};
  for (int lane = 1; lane < 4; ++lane) {
    const auto li = static_cast<std::size_t>(lane_i[lane]);
    if (lane_d[lane] < best.distance_sq ||
        (lane_d[lane] == best.distance_sq && li < best.index)) {
      best = {li, lane_d[lane]};
    }
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

#undef EGRESS_AVX2

constexpr KernelTable kAvx2{"avx2", &count_in_radius_avx2, &nearest_point_avx2};

}  // namespace

const KernelTable* avx2_table() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_table() noexcept { return nullptr; }

#endif

}  // namespace egress::kernels::detail
