#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>

namespace gobrowse::core {

inline uint64_t fnv1a64(std::string_view data, uint64_t seed = 0xcbf29ce484222325ull) {
  uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(uint64_t value);

// Deterministic sub-seed from a base seed and a list of labels. Every
// stochastic rollout in a run draws its RNG seed through this, so results are
// reproducible independent of worker scheduling.
uint64_t derive_seed(uint64_t base, std::initializer_list<std::string_view> parts);

// Single uniform draw in [0, 1). Shared by scripted policies and the
// analytic test oracles so both consume the generator identically.
inline double next_uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace gobrowse::core
