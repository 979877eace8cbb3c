#include <cstdlib>
#include <string_view>

#include "egress/kernels/kernels.hpp"

namespace egress::kernels {

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
  if (const auto* t = detail::avx2_table()) tables.push_back(t);
  if (const auto* t = detail::neon_table()) tables.push_back(t);
  return tables;
}

namespace {

const KernelTable& select() noexcept {
  const auto tables = available_tables();
  if (const char* forced = std::getenv("EGRESS_SIM_KERNELS")) {
    const std::string_view want{forced};
    for (const auto* t : tables) {
      if (t->name == want) return *t;
    }
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

}  // namespace egress::kernels
