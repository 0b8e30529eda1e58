#pragma once

#include <cstdint>

namespace molhop {

// splitmix64; used to expand seeds and derive independent substreams
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with substream derivation from (base_seed, stream_id).
// Streams depend only on their ids, so results are independent of
// thread scheduling and worker count.
class Rng {
 public:
  Rng() : Rng(0, 0) {}
  Rng(std::uint64_t base_seed, std::uint64_t stream_id) {
    std::uint64_t sm = base_seed ^ (stream_id * 0xD2B74407B1CE6E93ULL + 0x8CB92BA72F3D8DD7ULL);
    for (auto& w : state_) w = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // standard normal, float precision (ziggurat)
  float normal_f();
  // standard normal, double precision
  double normal() { return static_cast<double>(normal_f()); }

  // UniformRandomBitGenerator interface
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~0ULL; }
  result_type operator()() { return next_u64(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4];
};

}  // namespace molhop
