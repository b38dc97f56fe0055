#include "hamlab/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace hamlab::kernels {

const Table& scalar() {
  static const Table table{"scalar", scalar_impl::masked_sum_u64, scalar_impl::masked_sum_f64,
                           scalar_impl::accumulate_i64, scalar_impl::popcount_and};
  return table;
}

const Table* avx2() {
#if defined(HAMLAB_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  static const Table table{"avx2", avx2_impl::masked_sum_u64, avx2_impl::masked_sum_f64,
                           avx2_impl::accumulate_i64, avx2_impl::popcount_and};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& chosen = [&]() -> const Table& {
    const char* env = std::getenv("HAMLAB_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar();
    if (const Table* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace hamlab::kernels
