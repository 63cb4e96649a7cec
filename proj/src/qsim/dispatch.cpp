#include <atomic>
#include <cstdlib>
#include <string_view>

#include "rrb/qsim/kernels.hpp"

namespace rrb::qsim {

namespace {

const KernelTable* initial_selection() {
  if (const char* env = std::getenv("RRB_KERNELS")) {
    const std::string_view want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (const KernelTable* simd = avx2_kernels()) return simd;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> table{initial_selection()};
  return table;
}

}  // namespace

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

bool select_kernels(KernelChoice choice) {
  const KernelTable* table = nullptr;
  switch (choice) {
    case KernelChoice::automatic:
      table = avx2_kernels() ? avx2_kernels() : &scalar_kernels();
      break;
    case KernelChoice::scalar:
      table = &scalar_kernels();
      break;
    case KernelChoice::avx2:
      table = avx2_kernels();
      break;
  }
  if (!table) return false;
  active().store(table, std::memory_order_release);
  return true;
}

}  // namespace rrb::qsim
