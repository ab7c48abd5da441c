#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace onequery::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stable sub-seed for trial/attempt streams derived from one user-facing seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t step = 0) {
  return splitmix64(splitmix64(base ^ 0xD1B54A32D192ED03ull) ^ splitmix64(stream) ^ step);
}

// Unbiased draw in [0, bound); rejection keeps it exact for any bound.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t v = gen();
  while (v < threshold) v = gen();
  return v % bound;
}

inline std::uint32_t uniform_digit(std::mt19937_64& gen, std::uint32_t modulus) {
  return static_cast<std::uint32_t>(uniform_below(gen, modulus));
}

// 53-bit dyadic uniform in [0, 1).
inline double canonical(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace onequery::rng
