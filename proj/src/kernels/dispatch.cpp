#include "charlab/kernels.hpp"

#include "charlab/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace charlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(CHARLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  if (const char* forced = std::getenv("CHARLAB_ISA"); forced && std::string(forced) == "scalar")
    return &scalar::table();
  return cpu_has_avx2() ? &avx2::table() : &scalar::table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool available(Isa isa) { return isa == Isa::scalar || cpu_has_avx2(); }

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (!available(isa)) throw ParameterError("kernel variant '" + std::string(isa_name(isa)) + "' not supported by this CPU");
  current().store(isa == Isa::avx2 ? &avx2::table() : &scalar::table(), std::memory_order_relaxed);
}

}  // namespace charlab::kernels
