#include "hamlab/kernels.hpp"

#include <bit>

namespace hamlab::kernels::scalar_impl {

std::uint64_t masked_sum_u64(const std::uint64_t* row, std::uint64_t select) {
  std::uint64_t sum = 0;
  while (select) {
    sum += row[std::countr_zero(select)];
    select &= select - 1;
  }
  return sum;
}

double masked_sum_f64(const double* row, std::uint64_t select) {
  double sum = 0.0;
  while (select) {
    sum += row[std::countr_zero(select)];
    select &= select - 1;
  }
  return sum;
}

void accumulate_i64(std::int64_t* acc, const std::int64_t* col, std::int64_t sign, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += sign * col[i];
}

void popcount_and(const std::uint64_t* rows, std::uint64_t target, std::uint32_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint32_t>(std::popcount(rows[i] & target));
}

}  // namespace hamlab::kernels::scalar_impl
