// Compiled with -mavx2; only reached through the dispatch table after a CPUID
// check.
#include "hamlab/kernels.hpp"

#include <immintrin.h>

#include <array>
#include <bit>

namespace hamlab::kernels::avx2_impl {
namespace {

// Lane masks for each 4-bit selection pattern.
struct NibbleMasks {
  alignas(32) std::array<std::array<std::uint64_t, 4>, 16> lanes{};
  constexpr NibbleMasks() {
    for (unsigned nib = 0; nib < 16; ++nib)
      for (unsigned l = 0; l < 4; ++l) lanes[nib][l] = ((nib >> l) & 1u) ? ~std::uint64_t{0} : 0;
  }
};
constexpr NibbleMasks kMasks{};

inline __m256i lane_mask(unsigned nib) {
  return _mm256_load_si256(reinterpret_cast<const __m256i*>(kMasks.lanes[nib].data()));
}

inline std::uint64_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t t[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(t), v);
  return t[0] + t[1] + t[2] + t[3];
}

}  // namespace

std::uint64_t masked_sum_u64(const std::uint64_t* row, std::uint64_t select) {
  if (!select) return 0;
  const unsigned limit = 64u - static_cast<unsigned>(std::countl_zero(select));
  __m256i acc = _mm256_setzero_si256();
  unsigned i = 0;
  for (; i + 4 <= limit; i += 4) {
    const unsigned nib = static_cast<unsigned>(select >> i) & 0xFu;
    if (!nib) continue;
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(row + i));
    acc = _mm256_add_epi64(acc, _mm256_and_si256(v, lane_mask(nib)));
  }
  std::uint64_t sum = hsum_epi64(acc);
  for (; i < limit; ++i)
    if ((select >> i) & 1u) sum += row[i];
  return sum;
}

double masked_sum_f64(const double* row, std::uint64_t select) {
  if (!select) return 0.0;
  const unsigned limit = 64u - static_cast<unsigned>(std::countl_zero(select));
  __m256d acc = _mm256_setzero_pd();
  unsigned i = 0;
  for (; i + 4 <= limit; i += 4) {
    const unsigned nib = static_cast<unsigned>(select >> i) & 0xFu;
    if (!nib) continue;
    const __m256d v = _mm256_loadu_pd(row + i);
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, _mm256_castsi256_pd(lane_mask(nib))));
  }
  alignas(32) double t[4];
  _mm256_store_pd(t, acc);
  double sum = (t[0] + t[1]) + (t[2] + t[3]);
  for (; i < limit; ++i)
    if ((select >> i) & 1u) sum += row[i];
  return sum;
}

void accumulate_i64(std::int64_t* acc, const std::int64_t* col, std::int64_t sign, std::size_t n) {
  std::size_t i = 0;
  if (sign > 0) {
    for (; i + 4 <= n; i += 4) {
      auto* a = reinterpret_cast<__m256i*>(acc + i);
      const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + i));
      _mm256_storeu_si256(a, _mm256_add_epi64(_mm256_loadu_si256(a), c));
    }
  } else {
    for (; i + 4 <= n; i += 4) {
      auto* a = reinterpret_cast<__m256i*>(acc + i);
      const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + i));
      _mm256_storeu_si256(a, _mm256_sub_epi64(_mm256_loadu_si256(a), c));
    }
  }
  for (; i < n; ++i) acc[i] += sign * col[i];
}

void popcount_and(const std::uint64_t* rows, std::uint64_t target, std::uint32_t* out, std::size_t n) {
  // Nibble lookup popcount (Mula et al.), summed per 64-bit lane by SAD.
  const __m256i lut = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
                                       0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low4 = _mm256_set1_epi8(0x0f);
  const __m256i t = _mm256_set1_epi64x(static_cast<long long>(target));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_and_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(rows + i)), t);
    const __m256i lo = _mm256_shuffle_epi8(lut, _mm256_and_si256(v, low4));
    const __m256i hi = _mm256_shuffle_epi8(lut, _mm256_and_si256(_mm256_srli_epi16(v, 4), low4));
    const __m256i counts = _mm256_sad_epu8(_mm256_add_epi8(lo, hi), _mm256_setzero_si256());
    alignas(32) std::uint64_t c[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(c), counts);
    for (int l = 0; l < 4; ++l) out[i + l] = static_cast<std::uint32_t>(c[l]);
  }
  for (; i < n; ++i) out[i] = static_cast<std::uint32_t>(std::popcount(rows[i] & target));
}

}  // namespace hamlab::kernels::avx2_impl
