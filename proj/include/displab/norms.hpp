#pragma once

#include <cstdint>
#include <string>

#include "displab/potentials.hpp"

namespace displab {

struct QuadConfig {
  double rel_tol = 1e-12;
  std::size_t golden_iters = 80;
};

struct NormThresholds {
  double kato = 4.0 * pi;
  double rollnik_sq = 16.0 * pi * pi;
  double c0 = 0.05;
};

struct NormFlags {
  bool rollnik_small = false;
  bool kato_small = false;
  bool y_small = false;
};

struct NormReport {
  double rollnik = 0;
  double rollnik_se = 0;
  double kato_global = 0;
  double l32 = 0;
  double y_norm = 0;
  NormFlags flags;
};

// sup_x int |V0(y)| / |x - y| dy
double kato_global(const SpatialPotential& V0, const QuadConfig& quad = {});

// sqrt of int int |V(x)||V(y)| / |x-y|^2 by 6D Monte-Carlo
McEstimate rollnik(const SpatialPotential& V0, std::size_t samples, std::uint64_t seed);

double l32_norm(const SpatialPotential& V0);

NormFlags norm_flags(double rollnik, double kato, double y, const NormThresholds& th);

NormReport y_norm(const SeparablePotential& V, const NormThresholds& th = {}, std::size_t samples = 200000,
                  std::uint64_t seed = 1);

}  // namespace displab
