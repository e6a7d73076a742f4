#pragma once

#include <cstdint>
#include <vector>

#include "displab/common.hpp"
#include "displab/parallel.hpp"
#include "displab/rng.hpp"

namespace displab {

inline constexpr std::size_t kMcShards = 16;

// Mean of draw(rng) over n samples split into a fixed number of seeded
// shards; the pooled result is independent of the worker count.
template <class Draw>
McEstimate mc_mean(std::size_t n, std::uint64_t seed, Draw&& draw) {
  struct Acc {
    double sum = 0, sum2 = 0;
    std::size_t n = 0;
  };
  std::vector<Acc> acc(kMcShards);
  parallel_for(kMcShards, [&](std::size_t s) {
    auto g = make_stream(seed, s);
    const std::size_t count = n / kMcShards + (s < n % kMcShards ? 1 : 0);
    Acc a;
    for (std::size_t i = 0; i < count; ++i) {
      const double v = draw(g);
      a.sum += v;
      a.sum2 += v * v;
    }
    a.n = count;
    acc[s] = a;
  });
  double sum = 0, sum2 = 0;
  std::size_t tot = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sum2 += a.sum2;
    tot += a.n;
  }
  McEstimate e;
  e.samples = tot;
  if (tot == 0) return e;
  e.value = sum / static_cast<double>(tot);
  const double var = std::max(0.0, sum2 / static_cast<double>(tot) - e.value * e.value);
  e.std_error = tot > 1 ? std::sqrt(var / static_cast<double>(tot - 1)) : 0.0;
  return e;
}

template <class Draw>
McEstimateC mc_mean_complex(std::size_t n, std::uint64_t seed, Draw&& draw) {
  struct Acc {
    cplx sum{};
    double sum2 = 0;
    std::size_t n = 0;
  };
  std::vector<Acc> acc(kMcShards);
  parallel_for(kMcShards, [&](std::size_t s) {
    auto g = make_stream(seed, s);
    const std::size_t count = n / kMcShards + (s < n % kMcShards ? 1 : 0);
    Acc a;
    for (std::size_t i = 0; i < count; ++i) {
      const cplx v = draw(g);
      a.sum += v;
      a.sum2 += std::norm(v);
    }
    a.n = count;
    acc[s] = a;
  });
  cplx sum{};
  double sum2 = 0;
  std::size_t tot = 0;
  for (const auto& a : acc) {
    sum += a.sum;
    sum2 += a.sum2;
    tot += a.n;
  }
  McEstimateC e;
  e.samples = tot;
  if (tot == 0) return e;
  e.value = sum / static_cast<double>(tot);
  const double var = std::max(0.0, sum2 / static_cast<double>(tot) - std::norm(e.value));
  e.std_error = tot > 1 ? std::sqrt(var / static_cast<double>(tot - 1)) : 0.0;
  return e;
}

}  // namespace displab
