#pragma once

#include <cmath>
#include <cstdint>

namespace anarchy::rng {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, counter), so results do not depend on evaluation order or
// thread count. The mixer is the splitmix64 finalizer.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

/// Uniform draw on the open interval (0,1).
inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t r = keyed(seed, stream, counter);
  return (static_cast<double>(r >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

/// Log-uniform value in [lo, hi] from a uniform u in (0,1).
inline double log_uniform(double u, double lo, double hi) {
  return lo * std::exp(u * std::log(hi / lo));
}

}  // namespace anarchy::rng
