#include "charlab/kernels.hpp"

#include <bit>

namespace charlab::kernels::scalar {

namespace {

std::uint64_t popcount(const std::uint64_t* a, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i]);
  return total;
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & b[i]);
  return total;
}

std::uint64_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < words; ++i) total += std::popcount(a[i] & ~b[i]);
  return total;
}

void and_assign(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] &= src[i];
}

void andnot_assign(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] &= ~src[i];
}

void subset_degrees(const std::uint32_t* masks, std::size_t count, std::uint32_t subset, std::uint32_t* out) {
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::uint32_t>(std::popcount(masks[i] & subset));
}

const KernelTable kTable{Isa::scalar, popcount, and_popcount, andnot_popcount, and_assign, andnot_assign, subset_degrees};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace charlab::kernels::scalar
