#pragma once

#include <cmath>
#include <cstdint>

namespace heis {

// Counter-based random streams.  Every draw is a pure function of
// (seed, stream, index, counter), so results do not depend on evaluation
// order or worker count.  The mixer is the SplitMix64 finalizer.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(a) ^ b);
}

// FNV-1a over a string; used to derive stream ids from check names.
inline std::uint64_t hash_name(const char* s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (; *s; ++s) h = (h ^ static_cast<unsigned char>(*s)) * 1099511628211ULL;
  return h;
}

struct Rand {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  Rand() = default;
  Rand(std::uint64_t seed_, std::uint64_t stream_) : seed(seed_), stream(stream_) {}
  Rand(std::uint64_t seed_, const char* stream_name)
      : seed(seed_), stream(hash_name(stream_name)) {}

  Rand sub(std::uint64_t tag) const { return Rand(seed, mix64(stream, tag)); }
  Rand sub(const char* tag) const { return Rand(seed, mix64(stream, hash_name(tag))); }

  std::uint64_t bits(std::uint64_t index, std::uint64_t counter = 0) const {
    return mix64(mix64(mix64(seed) ^ stream) ^ index, counter);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double u01(std::uint64_t index, std::uint64_t counter = 0) const {
    return static_cast<double>(bits(index, counter) >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b, std::uint64_t index, std::uint64_t counter = 0) const {
    return a + (b - a) * u01(index, counter);
  }

  // Standard normal via Box-Muller; uses counters (2c, 2c+1).
  double normal(std::uint64_t index, std::uint64_t counter = 0) const {
    const double u1 = u01(index, 2 * counter);
    const double u2 = u01(index, 2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1 + 0x1.0p-64));
    return r * std::cos(6.283185307179586 * u2);
  }
};

} // namespace heis
