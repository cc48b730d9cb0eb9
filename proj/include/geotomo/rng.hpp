#pragma once
// Counter-based random numbers: every draw is a pure function of
// (seed, index), so the i-th measurement of a sequence gets the same noise no
// matter how many measurements follow it.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace geotomo::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0) {
  return splitmix64(seed ^ splitmix64(index * 2 + lane + 0x632be59bd9b4e019ULL));
}

/// Uniform on (0, 1), 53-bit resolution.
inline double uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0) {
  return (static_cast<double>(mix(seed, index, lane) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal by Box-Muller on lanes 0 and 1 of the counter.
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform(seed, index, 0);
  const double u2 = uniform(seed, index, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Seed of sub-experiment (a, b) derived from a base seed.
inline std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return base ^ splitmix64(splitmix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

}  // namespace geotomo::rng
