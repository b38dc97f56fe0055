#pragma once

#include <cstdint>

namespace hamlab {

/// Seed for every generator. Equal seeds give bit-identical output on every
/// platform: the library never routes randomness through <random>
/// distributions, whose algorithms are implementation-defined.
struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Independent child seed for stream `index` (trial number, exposure round).
constexpr Seed derive_seed(Seed parent, std::uint64_t index) {
  return Seed{mix64(parent.value ^ mix64(index))};
}

/// xoshiro256** seeded through SplitMix64.
class Rng {
 public:
  explicit Rng(Seed seed) {
    std::uint64_t x = seed.value;
    // The first four SplitMix64 outputs for this seed.
    for (auto& w : s_) {
      w = mix64(x);
      x += 0x9e3779b97f4a7c15ull;
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound) without modulo bias (Lemire).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

/// Fisher-Yates shuffle driven by Rng::below.
template <class Range>
void shuffle(Range& r, Rng& rng) {
  const auto size = static_cast<std::uint64_t>(std::size(r));
  for (std::uint64_t i = size; i > 1; --i) {
    const auto j = rng.below(i);
    using std::swap;
    swap(r[i - 1], r[j]);
  }
}

}  // namespace hamlab
