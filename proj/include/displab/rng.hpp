#pragma once

#include <cstdint>
#include <random>

#include "displab/common.hpp"

namespace displab {

// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Stream for (seed, shard). Distinct shards give decorrelated engines.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t shard);

inline double uniform01(std::mt19937_64& g) {
  // 53 random bits in (0, 1)
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

Vec3 random_direction(std::mt19937_64& g);

}  // namespace displab
