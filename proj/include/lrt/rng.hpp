#pragma once

#include <cstdint>

namespace lrt {

// Counter-based random numbers: every draw is a pure function of a key and
// a counter, so any (seed, trial, step) stream can be regenerated in
// isolation and in any order.
std::uint64_t splitmix64(std::uint64_t x);

// Hash several 64-bit words into one stream key.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0);

// Uniform in (0, 1), never exactly 0 or 1.
double uniform_at(std::uint64_t key, std::uint64_t counter);

// Standard normal (Box-Muller on two hashed uniforms).
double normal_at(std::uint64_t key, std::uint64_t counter);

}  // namespace lrt
