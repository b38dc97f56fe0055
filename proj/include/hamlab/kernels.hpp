#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops. Every kernel has a portable scalar reference and
// an AVX2 variant; the active table is chosen once at startup from CPUID and
// can be forced to scalar with HAMLAB_SIMD=scalar.

namespace hamlab::kernels {

/// Sum of row[i] over set bits i of `select` (wrapping mod 2^64).
/// `row` must hold at least 64 - countl_zero(select) entries.
using MaskedSumU64 = std::uint64_t (*)(const std::uint64_t* row, std::uint64_t select);
/// Same with doubles.
using MaskedSumF64 = double (*)(const double* row, std::uint64_t select);
/// acc[i] += sign * col[i] for i < n, sign in {-1, +1}.
using AccumulateI64 = void (*)(std::int64_t* acc, const std::int64_t* col, std::int64_t sign, std::size_t n);
/// out[i] = popcount(rows[i] & target) for i < n.
using PopcountAnd = void (*)(const std::uint64_t* rows, std::uint64_t target, std::uint32_t* out, std::size_t n);

struct Table {
  std::string_view name;
  MaskedSumU64 masked_sum_u64;
  MaskedSumF64 masked_sum_f64;
  AccumulateI64 accumulate_i64;
  PopcountAnd popcount_and;
};

const Table& scalar();
/// nullptr when the build or the CPU lacks AVX2.
const Table* avx2();
/// The table every library routine calls through.
const Table& active();

namespace scalar_impl {
std::uint64_t masked_sum_u64(const std::uint64_t* row, std::uint64_t select);
double masked_sum_f64(const double* row, std::uint64_t select);
void accumulate_i64(std::int64_t* acc, const std::int64_t* col, std::int64_t sign, std::size_t n);
void popcount_and(const std::uint64_t* rows, std::uint64_t target, std::uint32_t* out, std::size_t n);
}  // namespace scalar_impl

#if defined(HAMLAB_HAVE_AVX2)
namespace avx2_impl {
std::uint64_t masked_sum_u64(const std::uint64_t* row, std::uint64_t select);
double masked_sum_f64(const double* row, std::uint64_t select);
void accumulate_i64(std::int64_t* acc, const std::int64_t* col, std::int64_t sign, std::size_t n);
void popcount_and(const std::uint64_t* rows, std::uint64_t target, std::uint32_t* out, std::size_t n);
}  // namespace avx2_impl
#endif

}  // namespace hamlab::kernels
