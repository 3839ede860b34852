#pragma once

// Deterministic random streams for parallel Monte Carlo runs.
//
// Every replicate / sweep point owns an independent engine derived from
// (seed, stream index) through a SplitMix64 mix, so results never depend
// on worker count or scheduling order.

#include <cstdint>
#include <random>

namespace tempermc {

// One SplitMix64 step (Steele, Lea & Flood). Advances `state`.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Engine for stream `index` of a run seeded with `seed`.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
  const std::uint64_t w0 = splitmix64(s);
  const std::uint64_t w1 = splitmix64(s);
  const std::uint64_t w2 = splitmix64(s);
  const std::uint64_t w3 = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(w0), static_cast<std::uint32_t>(w0 >> 32),
                    static_cast<std::uint32_t>(w1), static_cast<std::uint32_t>(w1 >> 32),
                    static_cast<std::uint32_t>(w2), static_cast<std::uint32_t>(w2 >> 32),
                    static_cast<std::uint32_t>(w3), static_cast<std::uint32_t>(w3 >> 32)};
  return std::mt19937_64(seq);
}

// Uniform double in the open interval (0,1), 53-bit resolution.
inline double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace tempermc
