#pragma once

#include <random>
#include <vector>

#include "displab/potentials.hpp"

namespace displab {

// I(k, p; a, b) = integral over [a, b] of 4 pi s^k |V(s)|^p ds, with b = inf
// allowed. Algebraic tails are closed analytically; throws DivergenceError
// when the tail exponent makes the integral infinite.
double radial_moment(const SpatialPotential& V, double k, double p, double a, double b);

// Newton reduction of the Kato integral at |x| = r:
//   (1/r) int_0^r 4 pi s^2 |V| ds + int_r^inf 4 pi s |V| ds
double newton_potential(const SpatialPotential& V, double r);

// Characteristic length of the profile (width, radius or half the outer breakpoint).
double length_scale(const SpatialPotential& V);

// Samples r >= 0 with density proportional to s^k |V(s)|^p, tabulated on a
// fine grid plus a Pareto tail for algebraic profiles. pdf() is the exact
// density of the sampler, so importance weights stay unbiased.
class RadialSampler {
 public:
  RadialSampler(const SpatialPotential& V, double k, double p, std::size_t cells = 4096);

  double sample(std::mt19937_64& g) const;
  double pdf(double r) const;
  // density of the 3D point with |x| = r under isotropic placement
  double pdf3(double r) const { return r > 0 ? pdf(r) / (4.0 * pi * r * r) : 0.0; }
  Vec3 sample_point(std::mt19937_64& g) const;

 private:
  double rmax_ = 0.0;
  double dr_ = 0.0;
  std::vector<double> cdf_;   // cumulative cell mass, normalized including tail
  std::vector<double> dens_;  // per-cell density
  double tail_mass_ = 0.0;
  double tail_alpha_ = 2.0;
};

}  // namespace displab
