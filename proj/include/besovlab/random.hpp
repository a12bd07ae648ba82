#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace besovlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`; independent of evaluation order.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(mix64(seed)); }

inline std::vector<double> standard_normals(Engine& engine, std::size_t count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> z(count);
  for (auto& x : z) x = normal(engine);
  return z;
}

}  // namespace besovlab
