#include "charlab/kernels.hpp"

#if defined(CHARLAB_HAVE_AVX2)

#include <immintrin.h>

#include <bit>

namespace charlab::kernels::avx2 {

namespace {

// Nibble-lookup popcount (Mula): per-byte counts via pshufb, summed with sad.
inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
}

inline __m256i popcount_u64(__m256i v) { return _mm256_sad_epu8(popcount_bytes(v), _mm256_setzero_si256()); }

inline std::uint64_t horizontal_sum(__m256i acc) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

template <class Combine, class ScalarCombine>
std::uint64_t reduce_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words, Combine combine,
                              ScalarCombine scalar_combine) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = b ? _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)) : va;
    acc = _mm256_add_epi64(acc, popcount_u64(combine(va, vb)));
  }
  std::uint64_t total = horizontal_sum(acc);
  for (; i < words; ++i) total += std::popcount(scalar_combine(a[i], b ? b[i] : a[i]));
  return total;
}

std::uint64_t popcount(const std::uint64_t* a, std::size_t words) {
  return reduce_popcount(
      a, nullptr, words, [](__m256i x, __m256i) { return x; }, [](std::uint64_t x, std::uint64_t) { return x; });
}

std::uint64_t and_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  return reduce_popcount(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_and_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

std::uint64_t andnot_popcount(const std::uint64_t* a, const std::uint64_t* b, std::size_t words) {
  // _mm256_andnot_si256(y, x) computes ~y & x
  return reduce_popcount(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_andnot_si256(y, x); },
      [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

void and_assign(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(d, _mm256_and_si256(_mm256_loadu_si256(d), s));
  }
  for (; i < words; ++i) dst[i] &= src[i];
}

void andnot_assign(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    _mm256_storeu_si256(d, _mm256_andnot_si256(s, _mm256_loadu_si256(d)));
  }
  for (; i < words; ++i) dst[i] &= ~src[i];
}

void subset_degrees(const std::uint32_t* masks, std::size_t count, std::uint32_t subset, std::uint32_t* out) {
  const __m256i sub = _mm256_set1_epi32(static_cast<int>(subset));
  const __m256i byte_sum = _mm256_set1_epi32(0x01010101);
  std::size_t i = 0;
  for (; i + 8 <= count; i += 8) {
    const __m256i m = _mm256_and_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + i)), sub);
    // Per-byte counts, then multiply by 0x01010101 to gather the four bytes into the top byte.
    const __m256i per_byte = popcount_bytes(m);
    const __m256i summed = _mm256_srli_epi32(_mm256_mullo_epi32(per_byte, byte_sum), 24);
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), summed);
  }
  for (; i < count; ++i) out[i] = static_cast<std::uint32_t>(std::popcount(masks[i] & subset));
}

const KernelTable kTable{Isa::avx2, popcount, and_popcount, andnot_popcount, and_assign, andnot_assign, subset_degrees};

}  // namespace

const KernelTable& table() { return kTable; }

}  // namespace charlab::kernels::avx2

#else

namespace charlab::kernels::avx2 {
const KernelTable& table() { return scalar::table(); }
}  // namespace charlab::kernels::avx2

#endif
