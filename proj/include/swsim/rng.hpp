#pragma once

#include <cstdint>

namespace swsim {

// 64-bit avalanche finalizer (Stafford variant 13 of the splitmix64 mixer).
constexpr uint64_t mix64(uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Keyed pseudorandom word from a four-word input. Stateless: the same
// input always yields the same output, which is what makes trials and
// tree codes replayable from a seed alone.
constexpr uint64_t prf(uint64_t k0, uint64_t k1, uint64_t c0, uint64_t c1) noexcept {
  uint64_t h = 0x243f6a8885a308d3ULL;  // pi digits, nothing-up-my-sleeve
  h = mix64(h ^ k0);
  h = mix64(h ^ k1);
  h = mix64(h ^ c0);
  h = mix64(h ^ c1);
  return h;
}

constexpr double u64_to_unit_double(uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;  // [0,1)
}

// Counter-based random stream with value semantics. Splitting derives an
// independently keyed child stream, so each trial can own its randomness
// without any coordination.
class Rng {
 public:
  Rng(uint64_t key0, uint64_t key1) : key0_(key0), key1_(key1) {}

  static Rng from_seed(uint64_t seed) {
    return Rng(mix64(seed + 0x9e3779b97f4a7c15ULL), mix64(seed + 0x3c6ef372fe94f82aULL));
  }

  Rng split(uint64_t lane) const {
    return Rng(prf(key0_, key1_, lane, 0x5357534d53504c54ULL),
               prf(key0_, key1_, lane, 0x5357534d53504c55ULL));
  }

  uint64_t next_u64() { return prf(key0_, key1_, counter_++, 0); }

  double next_double() { return u64_to_unit_double(next_u64()); }

 private:
  uint64_t key0_;
  uint64_t key1_;
  uint64_t counter_ = 0;
};

}  // namespace swsim
