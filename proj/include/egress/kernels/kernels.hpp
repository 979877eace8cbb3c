#pragma once

// Data-parallel inner loops of the simulator. Every kernel has a scalar
// reference implementation; ISA variants must return bit-identical results.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace egress::kernels {

/// Number of distinct point codes count_in_radius tallies.
inline constexpr std::size_t kCodeCount = 4;
using CodeCounts = std::array<std::uint32_t, kCodeCount>;

struct NearestResult {
  std::size_t index = 0;
  double distance_sq = 0.0;
};

/// Counts, per code, the points with (x - cx)^2 + (y - cy)^2 <= radius_sq.
/// codes[i] must be < kCodeCount. Counts are added to `counts`.
using CountInRadiusFn = void (*)(const double* xs, const double* ys, const std::uint8_t* codes,
                                 std::size_t n, double cx, double cy, double radius_sq,
                                 CodeCounts& counts);

/// First index minimising squared distance to (cx, cy). n must be > 0.
using NearestPointFn = NearestResult (*)(const double* xs, const double* ys, std::size_t n,
                                         double cx, double cy);

struct KernelTable {
  std::string_view name;
  CountInRadiusFn count_in_radius = nullptr;
  NearestPointFn nearest_point = nullptr;
};

const KernelTable& scalar_table() noexcept;

/// Tables compiled into this binary and usable on the running CPU, scalar first.
std::vector<const KernelTable*> available_tables();

/// Best available table. EGRESS_SIM_KERNELS=scalar|avx2|neon overrides the choice.
const KernelTable& active() noexcept;

namespace detail {
const KernelTable* avx2_table() noexcept;  // nullptr when not compiled in
const KernelTable* neon_table() noexcept;
}  // namespace detail

}  // namespace egress::kernels
