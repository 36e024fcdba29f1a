#include "lrt/rng.hpp"

#include <cmath>
#include <numbers>

namespace lrt {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ a);
  k = splitmix64(k ^ (b + 0x632be59bd9b4e019ULL));
  k = splitmix64(k ^ (c + 0x8cb92ba72f3d8dd7ULL));
  return k;
}

double uniform_at(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(key ^ splitmix64(counter));
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double normal_at(std::uint64_t key, std::uint64_t counter) {
  const double u1 = uniform_at(key, 2 * counter);
  const double u2 = uniform_at(key, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace lrt
