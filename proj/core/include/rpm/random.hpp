#pragma once

#include <cstdint>
#include <random>

namespace rpm {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Stable across platforms; used for every seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// hash64(a, b) = mix64(mix64(a) ^ b)
constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a) ^ b);
}

/// hash64(a, b, c) = mix64(hash64(a, b) ^ c)
constexpr std::uint64_t hash64(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix64(hash64(a, b) ^ c);
}

/// Independent streams split off one master seed.
enum class Stream : std::uint64_t {
  Signal = 1,
  Sensing = 2,
  Corruption = 3,
  Anchor = 4,
  PowerIteration = 5,
};

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

inline Engine make_engine(std::uint64_t master_seed, Stream stream) {
  return Engine(hash64(master_seed, static_cast<std::uint64_t>(stream)));
}

}  // namespace rpm
