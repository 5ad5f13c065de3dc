#pragma once

#include <cstdint>
#include <random>

namespace cuckoo {

// Stateless-ish 64-bit mixer used to derive per-trial and per-thread seeds.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  SplitMix64 sm{base ^ (salt * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull)};
  return sm.next();
}

// Seeded RNG. Raw mt19937_64 output and the rejection loop below are fully
// specified, so a seed reproduces the same stream on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // Uniform draw in [0, bound), bound > 0, without modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t min = (-bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= min) return r % bound;
    }
  }

  std::uint32_t below32(std::uint32_t bound) {
    return static_cast<std::uint32_t>(below(bound));
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Independent child stream; advancing the child does not advance *this
  // beyond the one draw consumed here.
  Rng split() { return Rng(mix_seed(next(), 0x5851f42d4c957f2dull)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace cuckoo
