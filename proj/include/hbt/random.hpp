#pragma once

#include <cstdint>
#include <random>

namespace hbt {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words with full avalanche.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combines a master seed with three indices into one 64-bit seed.
///
///   h = splitmix64(master)
///   h = splitmix64(h ^ a); h = splitmix64(h ^ b); h = splitmix64(h ^ c)
///
/// Sweeps call mix(master_seed, axis1_index, axis2_index, replicate). The
/// result depends only on the arguments, never on evaluation order.
constexpr std::uint64_t mix(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                            std::uint64_t c) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

/// Fixed offsets selecting independent logical draw streams from one seed.
enum class DrawStream : std::uint64_t {
  kSignalSplit = 1,   // rho
  kNoiseA = 2,        // rho'
  kNoiseB = 3,        // rho''
  kEfficiency = 4,    // thinning when efficiency < 1
  kPoissonA = 5,
  kPoissonB = 6,
};

inline Engine make_engine(std::uint64_t seed, DrawStream stream) {
  return Engine(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream))));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine output.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace hbt
