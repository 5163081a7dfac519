#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mdbglmb {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used for seed derivation and hypothesis history chains.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) noexcept
{
  return mix64(seed ^ (mix64(value) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

/// Derives an independent substream seed from a base seed and a list of tags.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept
{
  std::uint64_t h = mix64(base);
  for (auto t : tags)
  {
    h = hash_combine(h, t);
  }
  return h;
}

inline Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> tags)
{
  return Rng{ derive_seed(base, tags) };
}

}  // namespace mdbglmb
