#include "displab/rng.hpp"

namespace displab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(mix64(seed)), static_cast<std::uint32_t>(mix64(seed) >> 32),
                    static_cast<std::uint32_t>(mix64(shard ^ 0xA5A5A5A5ull)),
                    static_cast<std::uint32_t>(mix64(shard ^ 0xA5A5A5A5ull) >> 32)};
  return std::mt19937_64(seq);
}

Vec3 random_direction(std::mt19937_64& g) {
  const double z = 2.0 * uniform01(g) - 1.0;
  const double phi = 2.0 * pi * uniform01(g);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace displab
