#pragma once

// Word-level bitset kernels shared by every module. Each kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant; the variant is
// picked once at startup from CPUID and can be overridden for testing or by
// setting CHARLAB_ISA=scalar in the environment.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace charlab::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  std::uint64_t (*popcount)(const std::uint64_t* a, std::size_t words);
  std::uint64_t (*and_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  // popcount(a & ~b)
  std::uint64_t (*andnot_popcount)(const std::uint64_t* a, const std::uint64_t* b, std::size_t words);
  void (*and_assign)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  void (*andnot_assign)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  // out[i] = popcount(masks[i] & subset) for i < count
  void (*subset_degrees)(const std::uint32_t* masks, std::size_t count, std::uint32_t subset, std::uint32_t* out);
};

namespace scalar {
const KernelTable& table();
}
namespace avx2 {
// Only valid when available(Isa::avx2).
const KernelTable& table();
}

bool available(Isa isa);
const KernelTable& active();
// Forces a variant; throws ParameterError when the CPU lacks it.
void select(Isa isa);

inline std::uint64_t popcount(std::span<const std::uint64_t> a) { return active().popcount(a.data(), a.size()); }

inline std::uint64_t and_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().and_popcount(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline std::uint64_t andnot_popcount(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  return active().andnot_popcount(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void and_assign(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  active().and_assign(dst.data(), src.data(), dst.size() < src.size() ? dst.size() : src.size());
}

inline void andnot_assign(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  active().andnot_assign(dst.data(), src.data(), dst.size() < src.size() ? dst.size() : src.size());
}

inline void subset_degrees(std::span<const std::uint32_t> masks, std::uint32_t subset, std::span<std::uint32_t> out) {
  active().subset_degrees(masks.data(), masks.size() < out.size() ? masks.size() : out.size(), subset, out.data());
}

}  // namespace charlab::kernels
